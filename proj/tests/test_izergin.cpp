#include "superbethe/izergin.hpp"

#include "support.hpp"

using namespace superbethe;
using sbtest::q;

namespace {

// Direct definition with cofactor expansion, valid for n <= 3.
Scalar izergin_cofactor(const VarSet& x, const VarSet& y, const EvalContext& ctx) {
    const std::size_t n = x.size();
    Scalar pre = prod_eval(AuxKind::h, x, y, ctx);
    for (std::size_t l = 0; l < n; ++l)
        for (std::size_t m = l + 1; m < n; ++m)
            pre *= aux_eval(AuxKind::g, x[l], x[m], ctx) * aux_eval(AuxKind::g, y[m], y[l], ctx);
    auto t = [&](std::size_t i, std::size_t j) { return aux_eval(AuxKind::t, x[i], y[j], ctx); };
    Scalar det(1);
    if (n == 1)
        det = t(0, 0);
    else if (n == 2)
        det = t(0, 0) * t(1, 1) - t(0, 1) * t(1, 0);
    else if (n == 3)
        det = t(0, 0) * (t(1, 1) * t(2, 2) - t(1, 2) * t(2, 1)) - t(0, 1) * (t(1, 0) * t(2, 2) - t(1, 2) * t(2, 0)) +
              t(0, 2) * (t(1, 0) * t(2, 1) - t(1, 1) * t(2, 0));
    return pre * det;
}

VarSet reversed(const VarSet& v) {
    std::vector<Scalar> xs(v.begin(), v.end());
    std::reverse(xs.begin(), xs.end());
    return VarSet(xs);
}

} // namespace

TEST_CASE("izergin small cases") {
    const EvalContext ctx(Scalar(1));
    CHECK(izergin(VarSet{}, VarSet{}, ctx) == Scalar(1));
    CHECK(izergin(VarSet{q(5)}, VarSet{q(2)}, ctx) == aux_eval(AuxKind::g, q(5), q(2), ctx));
    const Scalar z = q(2, 7);
    CHECK(izergin(VarSet{z}, VarSet{z + ctx.c()}, ctx) == Scalar(-1));
    CHECK(izergin(VarSet{q(3), q(5)}, VarSet{q(1), q(2)}, ctx) == q(2, 3));
    CHECK_THROWS_AS(izergin(VarSet{q(3)}, VarSet{q(1), q(2)}, ctx), SizeMismatch);
    CHECK_THROWS_AS(izergin(VarSet{q(3), q(3)}, VarSet{q(1), q(2)}, ctx), PoleError);
}

TEST_CASE("bareiss matches cofactor expansion") {
    const EvalContext ctx(q(2, 3));
    for (std::size_t n = 1; n <= 3; ++n)
        for (std::uint64_t seed = 0; seed < 10; ++seed) {
            const VarSet all = sample_generic(2 * n, ctx, 100 * n + seed, {});
            const std::uint64_t lo = (std::uint64_t{1} << n) - 1;
            const VarSet x = all.subset(lo), y = all.subset(lo << n);
            CHECK(izergin(x, y, ctx) == izergin_cofactor(x, y, ctx));
        }
    CHECK(bareiss_determinant({Scalar(0), Scalar(1), Scalar(1), Scalar(0)}, 2) == Scalar(-1));
    CHECK(bareiss_determinant({Scalar(1), Scalar(2), Scalar(2), Scalar(4)}, 2).is_zero());
}

TEST_CASE("izergin is invariant under reversing both sets separately") {
    const EvalContext ctx(Scalar(1));
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        const VarSet all = sample_generic(6, ctx, seed, {});
        const VarSet x = all.subset(0b000111), y = all.subset(0b111000);
        const Scalar k = izergin(x, y, ctx);
        CHECK(izergin(reversed(x), y, ctx) == k);
        CHECK(izergin(x, reversed(y), ctx) == k);
    }
}

TEST_CASE("izergin numeric agrees with exact") {
    const EvalContext ex(Scalar(1));
    const EvalContext nu(Scalar(1), Mode::numeric);
    const VarSet all = sample_generic(8, ex, 5, {});
    const VarSet x = all.subset(0x0f), y = all.subset(0xf0);
    const Scalar a = izergin(x, y, ex);
    const Scalar b = izergin(x.with_mode(Mode::numeric), y.with_mode(Mode::numeric), nu);
    CHECK(std::abs(a.to_complex() - b.to_complex()) <= 1e-12 * std::abs(a.to_complex()));
}

TEST_CASE("shift identity") {
    const EvalContext ctx(Scalar(1));
    CHECK(check_shift_identity(VarSet{}, VarSet{}, ctx).is_zero());
    for (std::size_t n = 1; n <= 4; ++n)
        for (std::uint64_t seed = 0; seed < 5; ++seed) {
            const VarSet all = sample_generic(2 * n, ctx, seed + 31 * n, {});
            const std::uint64_t lo = (std::uint64_t{1} << n) - 1;
            CHECK(check_shift_identity(all.subset(lo), all.subset(lo << n), ctx).is_zero());
        }
}

TEST_CASE("appendix lemmas") {
    const EvalContext ctx(q(3, 2));
    for (std::size_t m1 = 0; m1 <= 3; ++m1)
        for (std::size_t m2 = 0; m1 + m2 <= 4; ++m2) {
            const std::size_t m = m1 + m2;
            const VarSet all = sample_generic(2 * m, ctx, 7 * m1 + m2, {});
            const std::uint64_t wmask = (std::uint64_t{1} << m) - 1;
            const VarSet w = all.subset(wmask);
            const VarSet u = all.subset(((std::uint64_t{1} << m1) - 1) << m);
            const VarSet v = all.subset(((std::uint64_t{1} << m2) - 1) << (m + m1));
            const auto a1 = lemma_a1(w, u, v, ctx);
            CHECK(a1.lhs == a1.rhs);
            const auto a2 = lemma_a2(w, u, v, ctx);
            CHECK(a2.lhs == a2.rhs);
        }
    CHECK_THROWS_AS(lemma_a1(VarSet{q(1)}, VarSet{}, VarSet{}, ctx), SizeMismatch);
}

TEST_CASE("summation identities used in the action proofs") {
    const EvalContext ctx(Scalar(1));
    for (std::size_t n = 1; n <= 4; ++n)
        for (std::uint64_t seed = 0; seed < 5; ++seed) {
            const VarSet all = sample_generic(2 * n, ctx, 50 + seed + 13 * n, {});
            const VarSet xi0 = all.subset((std::uint64_t{1} << n) - 1);
            const VarSet z = all.subset(((std::uint64_t{1} << n) - 1) << n);
            CHECK(check_ci_identity(xi0, z[n - 1], z.without(n - 1), ctx).is_zero());
            CHECK(check_ml_identity(xi0, z, ctx).is_zero());
        }
}
