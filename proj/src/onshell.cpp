#include "superbethe/onshell.hpp"

#include <cmath>
#include <complex>
#include <limits>
#include <random>

#include <Eigen/Dense>

namespace superbethe {

std::vector<Scalar> bethe_residuals(const BetheSystem& sys) {
    const EvalContext& ctx = sys.ctx;
    std::vector<Scalar> out;
    for (std::size_t j = 0; j < sys.u.size(); ++j) {
        const Scalar& uj = sys.u[j];
        const VarSet rest = sys.u.without(j);
        out.push_back(sys.weights.r1(uj) - prod_eval(AuxKind::f, uj, rest, ctx) * prod_eval(AuxKind::f, sys.v, uj, ctx) /
                                               prod_eval(AuxKind::f, rest, uj, ctx));
    }
    for (std::size_t k = 0; k < sys.v.size(); ++k) {
        const Scalar& vk = sys.v[k];
        out.push_back(sys.weights.r3(vk) - prod_eval(AuxKind::f, vk, sys.u, ctx));
    }
    return out;
}

Scalar tau_eval(const Scalar& z, const BetheSystem& sys) {
    const EvalContext& ctx = sys.ctx;
    const Scalar fvz = prod_eval(AuxKind::f, sys.v, z, ctx);
    return sys.weights.lambda1(z) * prod_eval(AuxKind::f, sys.u, z, ctx) +
           sys.weights.lambda2(z) * prod_eval(AuxKind::f, z, sys.u, ctx) * fvz - sys.weights.lambda3(z) * fvz;
}

Scalar tau_residue_u(std::size_t j, const BetheSystem& sys) {
    const EvalContext& ctx = sys.ctx;
    const Scalar& uj = sys.u[j];
    const VarSet rest = sys.u.without(j);
    return ctx.c() * sys.weights.lambda2(uj) *
           (prod_eval(AuxKind::f, uj, rest, ctx) * prod_eval(AuxKind::f, sys.v, uj, ctx) -
            sys.weights.r1(uj) * prod_eval(AuxKind::f, rest, uj, ctx));
}

Scalar tau_residue_v(std::size_t k, const BetheSystem& sys) {
    const EvalContext& ctx = sys.ctx;
    const Scalar& vk = sys.v[k];
    return ctx.c() * sys.weights.lambda2(vk) * prod_eval(AuxKind::f, sys.v.without(k), vk, ctx) *
           (sys.weights.r3(vk) - prod_eval(AuxKind::f, vk, sys.u, ctx));
}

LinearCombo SpectralDecomposition::combo() const {
    LinearCombo out;
    out.add(tau, wanted);
    for (const auto* group : {&lambda_terms, &lambda_tilde_terms, &m_terms})
        for (const auto& t : *group)
            out.add(t.coeff, t.label);
    return out;
}

SpectralDecomposition decompose_transfer_action(const Scalar& z, const BetheSystem& sys) {
    const EvalContext& ctx = sys.ctx;
    const WeightProvider& w = sys.weights;
    const VarSet& u = sys.u;
    const VarSet& v = sys.v;
    const VarSet zs{z};
    const Scalar l2 = w.lambda2(z);

    SpectralDecomposition out;
    out.tau = tau_eval(z, sys);
    out.wanted = BetheLabel{u, v};

    // pieces shared by Lambda_j and M_jk
    std::vector<Scalar> r1_part(u.size()), f_part(u.size());
    for (std::size_t j = 0; j < u.size(); ++j) {
        const VarSet rest = u.without(j);
        r1_part[j] = w.r1(u[j]) * prod_eval(AuxKind::f, rest, u[j], ctx) / prod_eval(AuxKind::f, v, u[j], ctx);
        f_part[j] = prod_eval(AuxKind::f, u[j], rest, ctx);
    }
    std::vector<Scalar> r3_part(v.size());
    for (std::size_t k = 0; k < v.size(); ++k)
        r3_part[k] = w.r3(v[k]) / prod_eval(AuxKind::f, v[k], u, ctx);

    for (std::size_t j = 0; j < u.size(); ++j) {
        const Scalar coeff = l2 * prod_eval(AuxKind::h, v, z, ctx) * prod_eval(AuxKind::g, v, z, ctx) *
                             aux_eval(AuxKind::g, z, u[j], ctx) * (r1_part[j] - f_part[j]);
        out.lambda_terms.push_back({j, 0, coeff, BetheLabel{zs.joined(u.without(j)), v}});
    }
    for (std::size_t k = 0; k < v.size(); ++k) {
        const VarSet rest = v.without(k);
        const Scalar coeff = l2 * prod_eval(AuxKind::f, z, u, ctx) * prod_eval(AuxKind::g, rest, v[k], ctx) *
                             prod_eval(AuxKind::h, rest, z, ctx) * aux_eval(AuxKind::g, z, v[k], ctx) *
                             (Scalar(1) - r3_part[k]);
        out.lambda_tilde_terms.push_back({0, k, coeff, BetheLabel{u, zs.joined(rest)}});
    }
    for (std::size_t j = 0; j < u.size(); ++j)
        for (std::size_t k = 0; k < v.size(); ++k) {
            const VarSet rest = v.without(k);
            const Scalar gvu = aux_eval(AuxKind::g, v[k], u[j], ctx);
            const Scalar gzv = aux_eval(AuxKind::g, z, v[k], ctx);
            const Scalar guz = aux_eval(AuxKind::g, u[j], z, ctx);
            const Scalar coeff = l2 * prod_eval(AuxKind::h, rest, z, ctx) * prod_eval(AuxKind::g, rest, v[k], ctx) *
                                 (r1_part[j] * gvu * gzv + f_part[j] * guz * (gzv + r3_part[k] * gvu));
            out.m_terms.push_back({j, k, coeff, BetheLabel{zs.joined(u.without(j)), zs.joined(rest)}});
        }
    return out;
}

LinearCombo transfer_action_combo(const Scalar& z, const BetheSystem& sys) {
    LinearCombo out;
    for (int k = 1; k <= 3; ++k) {
        const ActionInput in{OperatorId{k, k, 1}, VarSet{z}, BetheLabel{sys.u, sys.v}, sys.weights, sys.ctx};
        out.add(act_diag(in), Scalar(k == 3 ? -1 : 1));
    }
    return out;
}

Scalar three_term_identity(const Scalar& z, const Scalar& u, const Scalar& v, const EvalContext& ctx) {
    const Scalar gvu = aux_eval(AuxKind::g, v, u, ctx);
    const Scalar gzv = aux_eval(AuxKind::g, z, v, ctx);
    const Scalar guz = aux_eval(AuxKind::g, u, z, ctx);
    return gvu * gzv + guz * gzv + guz * gvu;
}

WeightProvider substituted_weights(const WeightProvider& base, const VarSet& u, const VarSet& v, const EvalContext& ctx) {
    WeightProvider out = base;
    out.lambda1 = [base, u, v, ctx](const Scalar& x) {
        for (std::size_t j = 0; j < u.size(); ++j)
            if (u[j] == x) {
                const VarSet rest = u.without(j);
                return base.lambda2(x) * prod_eval(AuxKind::f, x, rest, ctx) * prod_eval(AuxKind::f, v, x, ctx) /
                       prod_eval(AuxKind::f, rest, x, ctx);
            }
        return base.lambda1(x);
    };
    out.lambda3 = [base, u, v, ctx](const Scalar& x) {
        if (v.contains(x))
            return base.lambda2(x) * prod_eval(AuxKind::f, x, u, ctx);
        return base.lambda3(x);
    };
    return out;
}

WeightProvider synthetic_weights() {
    return WeightProvider{[](const Scalar& x) { return x * x + Scalar(2); },
                          [](const Scalar& x) { return x * x + Scalar(1); },
                          [](const Scalar& x) { return Scalar(2) * x * x + Scalar(3); }};
}

// ---------------------------------------------------------------------------
// Newton solver

namespace {

using CVec = Eigen::VectorXcd;

struct Evaluation {
    bool ok = false;
    CVec f;
    double norm = std::numeric_limits<double>::infinity();
};

BetheSystem system_at(const CVec& x, std::size_t a, const WeightProvider& w, const EvalContext& ctx) {
    std::vector<Scalar> u, v;
    for (Eigen::Index k = 0; k < x.size(); ++k)
        (static_cast<std::size_t>(k) < a ? u : v).push_back(Scalar(x[k]));
    return BetheSystem{VarSet(u), VarSet(v), w, ctx};
}

Evaluation evaluate(const CVec& x, std::size_t a, const WeightProvider& w, const EvalContext& ctx) {
    Evaluation out;
    try {
        const auto res = bethe_residuals(system_at(x, a, w, ctx));
        out.f.resize(static_cast<Eigen::Index>(res.size()));
        double norm = 0;
        for (std::size_t k = 0; k < res.size(); ++k) {
            out.f[static_cast<Eigen::Index>(k)] = res[k].to_complex();
            norm = std::max(norm, std::abs(res[k].to_complex()));
        }
        out.ok = std::isfinite(norm);
        out.norm = norm;
    } catch (const Error&) {
        out.ok = false;
    }
    return out;
}

double min_separation(const CVec& x) {
    double best = std::numeric_limits<double>::infinity();
    for (Eigen::Index i = 0; i < x.size(); ++i)
        for (Eigen::Index j = i + 1; j < x.size(); ++j)
            best = std::min(best, std::abs(x[i] - x[j]));
    return best;
}

bool same_set(const VarSet& p, const VarSet& q, double tol) {
    if (p.size() != q.size())
        return false;
    std::vector<bool> used(q.size(), false);
    for (const auto& x : p) {
        bool matched = false;
        for (std::size_t k = 0; k < q.size() && !matched; ++k)
            if (!used[k] && std::abs(x.to_complex() - q[k].to_complex()) <= tol)
                used[k] = matched = true;
        if (!matched)
            return false;
    }
    return true;
}

} // namespace

NewtonResult solve_bethe_newton(const ChainRep& chain, std::size_t a, std::size_t b, const NewtonOptions& opt) {
    if (chain.ctx().mode() != Mode::numeric)
        throw ConfigError("mode", "the Newton solver needs a numeric-mode chain");
    const EvalContext& ctx = chain.ctx();
    const WeightProvider w = chain_weights(chain);
    const auto dim = static_cast<Eigen::Index>(a + b);
    NewtonResult result;

    for (std::size_t s = 0; s < opt.seeds; ++s) {
        std::mt19937_64 rng(opt.seed * 1000003 + s);
        std::uniform_real_distribution<double> box(-3.0, 3.0);
        CVec x(dim);
        for (Eigen::Index k = 0; k < dim; ++k)
            x[k] = {box(rng), box(rng)};
        const std::string tag = "seed " + std::to_string(s) + ": ";

        Evaluation cur = evaluate(x, a, w, ctx);
        bool converged = cur.ok && cur.norm <= opt.tol;
        std::string why = cur.ok ? "iteration limit reached" : "starting point hits a pole";
        for (std::size_t it = 0; it < opt.max_iter && cur.ok && !converged; ++it) {
            Eigen::MatrixXcd jac(dim, dim);
            for (Eigen::Index k = 0; k < dim; ++k) {
                const double step = 1e-7 * std::max(1.0, std::abs(x[k]));
                CVec xp = x, xm = x;
                xp[k] += step;
                xm[k] -= step;
                const Evaluation ep = evaluate(xp, a, w, ctx), em = evaluate(xm, a, w, ctx);
                if (!ep.ok || !em.ok) {
                    cur.ok = false;
                    why = "Jacobian probe hits a pole";
                    break;
                }
                jac.col(k) = (ep.f - em.f) / (2.0 * step);
            }
            if (!cur.ok)
                break;
            const CVec dx = jac.fullPivLu().solve(-cur.f);
            if (!dx.allFinite()) {
                cur.ok = false;
                why = "singular Jacobian";
                break;
            }
            // damped step: halve until the residual decreases and no pole is hit
            bool accepted = false;
            for (double t = 1.0; t > 1e-8 && !accepted; t *= 0.5) {
                const CVec xn = x + t * dx;
                const Evaluation en = evaluate(xn, a, w, ctx);
                if (en.ok && en.norm < cur.norm) {
                    x = xn;
                    cur = en;
                    accepted = true;
                }
            }
            if (!accepted) {
                why = "line search stalled at residual " + std::to_string(cur.norm);
                break;
            }
            converged = cur.norm <= opt.tol;
        }
        if (!converged) {
            result.failures.push_back(tag + why);
            continue;
        }
        if (min_separation(x) < 1e-6) {
            result.failures.push_back(tag + "converged to coinciding parameters");
            continue;
        }
        BetheSystem root = system_at(x, a, w, ctx);
        bool duplicate = false;
        for (const auto& r : result.roots)
            duplicate = duplicate || (same_set(r.u, root.u, opt.dedup) && same_set(r.v, root.v, opt.dedup));
        if (duplicate)
            continue;
        result.roots.push_back(std::move(root));
        result.residuals.push_back(cur.norm);
    }
    return result;
}

double eigencheck(const ChainRep& chain, const BetheSystem& sys, const VarSet& probes) {
    const StateVector bvec = bethe_vector(chain, sys.weights, BetheLabel{sys.u, sys.v});
    const double scale = max_abs(bvec).abs();
    if (scale == 0.0)
        throw Error("eigencheck: the Bethe vector vanishes");
    double worst = 0;
    for (const auto& z : probes) {
        StateVector diff = apply_transfer(chain, z, bvec);
        axpy(diff, -tau_eval(z, sys), bvec);
        worst = std::max(worst, max_abs(diff).abs() / scale);
    }
    return worst;
}

double nearest_eigenvalue_gap(const ChainRep& chain, const BetheSystem& sys, const Scalar& z) {
    const DenseMatrix t = transfer_matrix(chain, z);
    const auto n = static_cast<Eigen::Index>(t.rows());
    Eigen::MatrixXcd m(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < n; ++j)
            m(i, j) = t(static_cast<std::size_t>(i), static_cast<std::size_t>(j)).to_complex();
    const Eigen::ComplexEigenSolver<Eigen::MatrixXcd> solver(m, false);
    const std::complex<double> tau = tau_eval(z, sys).to_complex();
    double best = std::numeric_limits<double>::infinity();
    for (Eigen::Index k = 0; k < n; ++k)
        best = std::min(best, std::abs(solver.eigenvalues()[k] - tau));
    return best;
}

} // namespace superbethe
