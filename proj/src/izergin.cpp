#include "superbethe/izergin.hpp"

#include <utility>

namespace superbethe {

Scalar bareiss_determinant(std::vector<Scalar> m, std::size_t n) {
    if (m.size() != n * n)
        throw SizeMismatch("bareiss_determinant: matrix is not n x n");
    if (n == 0)
        return Scalar(1);
    auto at = [&](std::size_t i, std::size_t j) -> Scalar& { return m[i * n + j]; };
    const bool exact = m.front().is_exact();
    Scalar sign(1);
    Scalar prev(1);
    for (std::size_t k = 0; k + 1 < n; ++k) {
        // exact mode: first nonzero pivot; numeric mode: largest magnitude
        std::size_t piv = k;
        for (std::size_t i = k; i < n; ++i) {
            if (exact) {
                if (!at(i, k).is_zero()) {
                    piv = i;
                    break;
                }
            } else if (at(i, k).abs() > at(piv, k).abs()) {
                piv = i;
            }
        }
        if (at(piv, k).is_zero())
            return exact ? Scalar(0) : Scalar::numeric(0.0);
        if (piv != k) {
            for (std::size_t j = 0; j < n; ++j)
                std::swap(at(k, j), at(piv, j));
            sign = -sign;
        }
        for (std::size_t i = k + 1; i < n; ++i) {
            for (std::size_t j = k + 1; j < n; ++j)
                at(i, j) = (at(i, j) * at(k, k) - at(i, k) * at(k, j)) / prev;
        }
        prev = at(k, k);
    }
    return sign * at(n - 1, n - 1);
}

Scalar izergin(const VarSet& x, const VarSet& y, const EvalContext& ctx) {
    const std::size_t n = x.size();
    if (y.size() != n)
        throw SizeMismatch("izergin: #x = " + std::to_string(n) + " but #y = " + std::to_string(y.size()));
    if (n == 0)
        return ctx.lift(Scalar(1));
    Scalar prefactor = ctx.lift(Scalar(1));
    for (std::size_t l = 0; l < n; ++l)
        for (std::size_t m = l + 1; m < n; ++m)
            prefactor *= aux_eval(AuxKind::g, x[l], x[m], ctx) * aux_eval(AuxKind::g, y[m], y[l], ctx);

    std::vector<Scalar> h(n * n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t k = 0; k < n; ++k)
            h[i * n + k] = aux_eval(AuxKind::h, x[i], y[k], ctx);

    std::vector<Scalar> mat(n * n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            Scalar e = aux_eval(AuxKind::g, x[i], y[j], ctx);
            for (std::size_t k = 0; k < n; ++k)
                if (k != j)
                    e *= h[i * n + k];
            mat[i * n + j] = std::move(e);
        }
    }
    return prefactor * bareiss_determinant(std::move(mat), n);
}

Scalar check_shift_identity(const VarSet& x, const VarSet& y, const EvalContext& ctx) {
    const Scalar lhs = izergin(x, y.shifted(ctx.c()), ctx);
    Scalar rhs = izergin(y, x, ctx) / prod_eval(AuxKind::f, y, x, ctx);
    if (x.size() % 2 == 1)
        rhs = -rhs;
    return lhs - rhs;
}

IdentitySides lemma_a1(const VarSet& w, const VarSet& u, const VarSet& v, const EvalContext& ctx) {
    if (w.size() != u.size() + v.size())
        throw SizeMismatch("lemma_a1: #w must equal #u + #v");
    Scalar lhs = ctx.lift(Scalar(0));
    const std::size_t sizes[] = {u.size(), v.size()};
    for_each_partition(w, sizes, [&](std::span<const VarSet> p) {
        lhs += prod_eval(AuxKind::g, p[0], u, ctx) * prod_eval(AuxKind::g, p[1], v, ctx) *
               prod_eval(AuxKind::g, p[1], p[0], ctx);
    });
    const Scalar rhs = prod_eval(AuxKind::g, w, u, ctx) * prod_eval(AuxKind::g, w, v, ctx) /
                       prod_eval(AuxKind::g, u, v, ctx);
    return {lhs, rhs};
}

IdentitySides lemma_a2(const VarSet& w, const VarSet& u, const VarSet& v, const EvalContext& ctx) {
    if (w.size() != u.size() + v.size())
        throw SizeMismatch("lemma_a2: #w must equal #u + #v");
    Scalar lhs = ctx.lift(Scalar(0));
    const std::size_t sizes[] = {u.size(), v.size()};
    for_each_partition(w, sizes, [&](std::span<const VarSet> p) {
        lhs += izergin(p[0], u, ctx) * izergin(v, p[1], ctx) * prod_eval(AuxKind::f, p[1], p[0], ctx);
    });
    Scalar rhs = prod_eval(AuxKind::f, w, u, ctx) * izergin(u.shifted(-ctx.c()).joined(v), w, ctx);
    if (u.size() % 2 == 1)
        rhs = -rhs;
    return {lhs, rhs};
}

Scalar check_ci_identity(const VarSet& xi0, const Scalar& zn, const VarSet& zrest, const EvalContext& ctx) {
    if (xi0.size() != zrest.size() + 1)
        throw SizeMismatch("check_ci_identity: #xi0 must equal #zrest + 1");
    Scalar lhs = ctx.lift(Scalar(0));
    const std::size_t sizes[] = {xi0.size() - 1, 1};
    for_each_partition(xi0, sizes, [&](std::span<const VarSet> p) {
        const Scalar& xi = p[1][0];
        lhs += prod_eval(AuxKind::g, xi, p[0], ctx) * aux_eval(AuxKind::g, zn, xi, ctx) *
               prod_eval(AuxKind::h, xi, zrest, ctx);
    });
    const Scalar rhs = prod_eval(AuxKind::g, zn, xi0, ctx) * prod_eval(AuxKind::h, zn, zrest, ctx);
    return lhs - rhs;
}

Scalar check_ml_identity(const VarSet& eta0, const VarSet& z, const EvalContext& ctx) {
    const std::size_t n = z.size();
    if (n == 0 || eta0.size() != n)
        throw SizeMismatch("check_ml_identity: need #eta0 = #z >= 1");
    const Scalar& zn = z[n - 1];
    const VarSet zrest = z.without(n - 1);
    const Scalar& c = ctx.c();
    Scalar lhs = ctx.lift(Scalar(0));
    const std::size_t sizes[] = {n - 1, 1};
    for_each_partition(eta0, sizes, [&](std::span<const VarSet> p) {
        lhs += izergin(zrest, p[0].shifted(c), ctx) * izergin(p[1], VarSet{zn}, ctx) *
               prod_eval(AuxKind::f, p[0], p[1], ctx);
    });
    const Scalar rhs = -prod_eval(AuxKind::f, eta0, zn, ctx) * izergin(z, eta0.shifted(c), ctx);
    return lhs - rhs;
}

} // namespace superbethe
