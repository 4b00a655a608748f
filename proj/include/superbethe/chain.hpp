#pragma once

// Graded fundamental chain: R-matrix, monodromy entries and their checks.
//
// Basis levels are numbered 1..3 with grading [1]=[2]=0, [3]=1. A chain state
// is a vector over e_{i1} (x) ... (x) e_{iL}; site 1 is the most significant
// base-3 digit, and the pseudovacuum is e_1 (x) ... (x) e_1 (index 0).
//
// Convention: T(u) = D R_{0L}(u,theta_L) ... R_{01}(u,theta_1) with the
// Koszul-signed graded permutation, and
//   T_ij(u) psi = (-1)^{([i]+[j])[j]} <e_i| T(u) (e_j (x) psi).

#include <array>
#include <cstddef>
#include <vector>

#include "superbethe/field.hpp"
#include "superbethe/kernels.hpp"

namespace superbethe {

/// Grading of basis level 1..3.
int grade(int level);

/// Parity of the entry T_ij.
inline int entry_parity(int i, int j) { return (grade(i) + grade(j)) % 2; }

/// R(x,y) = I + g(x,y) P on C^{2|1} (x) C^{2|1}, row index 3*(a-1)+(b-1).
DenseMatrix build_r(const Scalar& x, const Scalar& y, const EvalContext& ctx);

/// max |R12 R13 R23 - R23 R13 R12| on the 27-dimensional triple product.
Scalar ybe_residual(const Scalar& x, const Scalar& y, const Scalar& z, const EvalContext& ctx);

using StateVector = std::vector<Scalar>;

/// Largest entry magnitude; 0 for an empty vector.
Scalar max_abs(const StateVector& v);
/// y += a x
void axpy(StateVector& y, const Scalar& a, const StateVector& x);
StateVector scaled(StateVector v, const Scalar& s);
StateVector difference(const StateVector& a, const StateVector& b);

class ChainRep {
public:
    /// Untwisted chain.
    ChainRep(VarSet theta, const EvalContext& ctx);
    ChainRep(VarSet theta, std::array<Scalar, 3> twist, const EvalContext& ctx);

    std::size_t length() const noexcept { return theta_.size(); }
    std::size_t dim() const noexcept { return dim_; }
    const VarSet& theta() const noexcept { return theta_; }
    const std::array<Scalar, 3>& twist() const noexcept { return twist_; }
    const EvalContext& ctx() const noexcept { return ctx_; }

    StateVector vacuum() const;
    StateVector zero() const;
    /// Parallel kernels by default; the serial path is kept for comparison.
    bool parallel = true;

private:
    VarSet theta_;
    std::array<Scalar, 3> twist_;
    EvalContext ctx_;
    std::size_t dim_;
};

/// T_ij(u) psi for levels i, j in 1..3.
StateVector apply_entry(const ChainRep& chain, int i, int j, const Scalar& u, const StateVector& psi);

/// {T_1j(u) psi, T_2j(u) psi, T_3j(u) psi} from a single pass through the chain.
std::array<StateVector, 3> apply_column(const ChainRep& chain, int j, const Scalar& u, const StateVector& psi);

/// T_ij(v_1) ... T_ij(v_n) psi, divided for odd entries by prod_{l>m} h(v_l,v_m)
/// (T_13, T_23) or prod_{l>m} h(v_m,v_l) (T_32, T_31).
StateVector apply_product(const ChainRep& chain, int i, int j, const VarSet& v, const StateVector& psi);

/// Normalizing divisor used by apply_product; 1 for even entries.
Scalar product_normalization(int i, int j, const VarSet& v, const EvalContext& ctx);

using Monodromy = std::array<std::array<DenseMatrix, 3>, 3>;

/// Dense blocks T_ij(u), indexed [i-1][j-1].
Monodromy build_monodromy(const ChainRep& chain, const Scalar& u);

/// max over all 81 (i,j,k,l) of the graded exchange relation residual.
Scalar rtt_residual(const ChainRep& chain, const Scalar& u, const Scalar& v);

/// max |T_ij(u) Omega| over i > j.
Scalar vacuum_residual(const ChainRep& chain, const Scalar& u);

/// Eigenvalue of T_ii(u) on the vacuum. Throws NotAnEigenvector otherwise.
Scalar lambda_eval(const ChainRep& chain, int i, const Scalar& u);
/// r_1 = lambda_1/lambda_2 (k = 1) or r_3 = lambda_3/lambda_2 (k = 3).
Scalar r_eval(const ChainRep& chain, int k, const Scalar& u);

/// Supertrace T_11 + T_22 - T_33 as a dense matrix.
DenseMatrix transfer_matrix(const ChainRep& chain, const Scalar& u);
/// transfer_matrix applied to a vector.
StateVector apply_transfer(const ChainRep& chain, const Scalar& u, const StateVector& psi);

/// Dense form of apply_product.
DenseMatrix sym_product(const ChainRep& chain, int i, int j, const VarSet& v);

} // namespace superbethe
