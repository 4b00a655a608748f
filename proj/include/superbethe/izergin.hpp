#pragma once

#include <vector>

#include "superbethe/field.hpp"

namespace superbethe {

struct IdentitySides {
    Scalar lhs;
    Scalar rhs;
    Scalar residual() const { return lhs - rhs; }
};

/// Determinant by fraction-free (Bareiss) elimination with pivot search.
/// `m` is row-major n x n.
Scalar bareiss_determinant(std::vector<Scalar> m, std::size_t n);

/// Izergin determinant K_n(x|y) = h(x,y) prod_{l<m} g(x_l,x_m) g(y_m,y_l) det[t(x_i,y_j)].
///
/// The determinant is evaluated with each row i scaled by prod_k h(x_i,y_k),
/// i.e. as det[g(x_i,y_j) prod_{k!=j} h(x_i,y_k)]. This is the same rational
/// function but stays finite where x_i - y_j = -c (e.g. K_1(z|z+c) = -1).
/// Poles remain at x_i = y_j and at coinciding elements inside x or y.
Scalar izergin(const VarSet& x, const VarSet& y, const EvalContext& ctx);

/// K_n(x|y+c) - (-1)^n K_n(y|x)/f(y,x).
Scalar check_shift_identity(const VarSet& x, const VarSet& y, const EvalContext& ctx);

/// sum g(w_I,u) g(w_II,v) g(w_II,w_I) over #w_I = #u  versus  g(w,u) g(w,v) / g(u,v).
IdentitySides lemma_a1(const VarSet& w, const VarSet& u, const VarSet& v, const EvalContext& ctx);

/// sum K(w_I|u) K(v|w_II) f(w_II,w_I)  versus  (-1)^{#u} f(w,u) K({u-c, v}|w).
IdentitySides lemma_a2(const VarSet& w, const VarSet& u, const VarSet& v, const EvalContext& ctx);

/// sum over xi0 => {xi_I, xi_i}, #xi_i = 1, of g(xi_i,xi_I) g(zn,xi_i) h(xi_i,zrest)
/// minus g(zn,xi0) h(zn,zrest). Requires #xi0 = #zrest + 1.
Scalar check_ci_identity(const VarSet& xi0, const Scalar& zn, const VarSet& zrest, const EvalContext& ctx);

/// sum over eta0 => {eta_I, eta_i}, #eta_i = 1, of
/// K_{n-1}(z_rest|eta_I + c) K_1(eta_i|z_n) f(eta_I,eta_i)  plus  f(eta0,z_n) K_n(z|eta0 + c),
/// where z_n is the last element of z and #eta0 = #z = n >= 1.
Scalar check_ml_identity(const VarSet& eta0, const VarSet& z, const EvalContext& ctx);

} // namespace superbethe
