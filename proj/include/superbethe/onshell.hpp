#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "superbethe/action.hpp"

namespace superbethe {

struct BetheSystem {
    VarSet u;
    VarSet v;
    WeightProvider weights;
    EvalContext ctx;
};

/// r_1(u_j) - f(u_j,u_j^c) f(v,u_j) / f(u_j^c,u_j) for each j, then r_3(v_k) - f(v_k,u) for each k.
std::vector<Scalar> bethe_residuals(const BetheSystem& sys);

/// lambda_1(z) f(u,z) + lambda_2(z) f(z,u) f(v,z) - lambda_3(z) f(v,z).
Scalar tau_eval(const Scalar& z, const BetheSystem& sys);

/// Residue of tau at z = u_j: c lambda_2(u_j) [f(u_j,u_j^c) f(v,u_j) - r_1(u_j) f(u_j^c,u_j)].
Scalar tau_residue_u(std::size_t j, const BetheSystem& sys);
/// Residue of tau at z = v_k: c lambda_2(v_k) f(v_k^c,v_k) [r_3(v_k) - f(v_k,u)].
Scalar tau_residue_v(std::size_t k, const BetheSystem& sys);

struct SpectralTerm {
    std::size_t j = 0;
    std::size_t k = 0;
    Scalar coeff;
    BetheLabel label;
};

/// T(z) B(u;v) = tau B(u;v) + sum_j Lambda_j B({z,u_j^c};v) + sum_k Lambda~_k B(u;{z,v_k^c})
///   + sum_jk M_jk B({z,u_j^c};{z,v_k^c}).
struct SpectralDecomposition {
    Scalar tau;
    BetheLabel wanted;
    std::vector<SpectralTerm> lambda_terms;
    std::vector<SpectralTerm> lambda_tilde_terms;
    std::vector<SpectralTerm> m_terms;

    LinearCombo combo() const;
};

SpectralDecomposition decompose_transfer_action(const Scalar& z, const BetheSystem& sys);

/// The same decomposition assembled from the n = 1 diagonal actions, T11 + T22 - T33.
LinearCombo transfer_action_combo(const Scalar& z, const BetheSystem& sys);

/// g(v,u) g(z,v) + g(u,z) g(z,v) + g(u,z) g(v,u).
Scalar three_term_identity(const Scalar& z, const Scalar& u, const Scalar& v, const EvalContext& ctx);

/// `base` with lambda_1(u_j) and lambda_3(v_k) replaced so that the Bethe
/// equations hold at the given sets.
WeightProvider substituted_weights(const WeightProvider& base, const VarSet& u, const VarSet& v, const EvalContext& ctx);

/// Chain-free rational weights: lambda_1 = x^2 + 2, lambda_2 = x^2 + 1, lambda_3 = 2x^2 + 3.
WeightProvider synthetic_weights();

struct NewtonOptions {
    std::size_t seeds = 8;
    std::uint64_t seed = 1;
    double tol = 1e-12;
    std::size_t max_iter = 100;
    /// Roots closer than this (up to permutation within u and v) are merged.
    double dedup = 1e-7;
};

struct NewtonResult {
    std::vector<BetheSystem> roots;
    std::vector<double> residuals;
    /// One entry per seed that did not converge.
    std::vector<std::string> failures;
};

/// Damped Newton iteration on the Bethe equations in numeric mode.
NewtonResult solve_bethe_newton(const ChainRep& chain, std::size_t a, std::size_t b, const NewtonOptions& opt = {});

/// max over probes of |T(z) B - tau(z) B| / |B|.
double eigencheck(const ChainRep& chain, const BetheSystem& sys, const VarSet& probes);

/// Distance from tau(z) to the nearest eigenvalue of the dense transfer matrix.
double nearest_eigenvalue_gap(const ChainRep& chain, const BetheSystem& sys, const Scalar& z);

} // namespace superbethe
