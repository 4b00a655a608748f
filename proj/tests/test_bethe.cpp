#include "superbethe/bethe.hpp"

#include "support.hpp"

using namespace superbethe;
using sbtest::q;

namespace {

struct Fixture {
    EvalContext ctx{Scalar(1)};
    ChainRep chain;
    WeightProvider w;
    explicit Fixture(std::size_t L, std::uint64_t seed = 1)
        : chain(sample_generic(L, ctx, seed, {}), {q(3, 2), Scalar(1), Scalar(2)}, ctx), w(chain_weights(chain)) {}

    BetheLabel label(std::size_t a, std::size_t b, std::uint64_t seed) const {
        const VarSet p = sample_generic(a + b, ctx, seed, chain.theta());
        const std::uint64_t ua = (std::uint64_t{1} << a) - 1;
        return {p.subset(ua), p.subset(((std::uint64_t{1} << b) - 1) << a)};
    }
};

VarSet reversed(const VarSet& v) {
    std::vector<Scalar> xs(v.begin(), v.end());
    std::reverse(xs.begin(), xs.end());
    return VarSet(xs);
}

} // namespace

TEST_CASE("simplest Bethe vectors") {
    Fixture fx(3);
    const BetheLabel empty{};
    for (auto route : {BetheRoute::sum_a, BetheRoute::sum_b, BetheRoute::recursive})
        CHECK(bethe_vector(fx.chain, fx.w, empty, route) == fx.chain.vacuum());

    const BetheLabel one = fx.label(1, 0, 5);
    const StateVector expect = scaled(apply_entry(fx.chain, 1, 2, one.u[0], fx.chain.vacuum()),
                                      Scalar(1) / fx.w.lambda2(one.u[0]));
    CHECK(bethe_sum_A(fx.chain, fx.w, one) == expect);

    const BetheLabel vv = fx.label(0, 2, 6);
    const StateVector expect_b =
        scaled(apply_product(fx.chain, 2, 3, vv.v, fx.chain.vacuum()), Scalar(1) / fx.w.lambda2_of(vv.v));
    CHECK(bethe_sum_B(fx.chain, fx.w, vv) == expect_b);
    CHECK(bethe_recursive(fx.chain, fx.w, vv) == expect_b);
}

TEST_CASE("three constructions agree") {
    Fixture fx(4);
    for (std::size_t a = 0; a <= 3; ++a)
        for (std::size_t b = 0; a + b <= 4; ++b)
            for (std::uint64_t seed = 0; seed < 2; ++seed) {
                CAPTURE(a);
                CAPTURE(b);
                const BetheLabel lbl = fx.label(a, b, 40 + seed + 10 * (a + 5 * b));
                const StateVector va = bethe_sum_A(fx.chain, fx.w, lbl);
                CHECK(va == bethe_sum_B(fx.chain, fx.w, lbl));
                CHECK(va == bethe_recursive(fx.chain, fx.w, lbl));
                if (b <= a && a + b > 0 && a <= 4)
                    CHECK_FALSE(max_abs(va).is_zero());
            }
}

TEST_CASE("Bethe vectors are symmetric in each parameter set") {
    Fixture fx(4, 2);
    const BetheLabel lbl = fx.label(3, 1, 8);
    const StateVector base = bethe_sum_A(fx.chain, fx.w, lbl);
    CHECK(bethe_sum_A(fx.chain, fx.w, BetheLabel{reversed(lbl.u), lbl.v}) == base);
    const BetheLabel two = fx.label(2, 2, 9);
    CHECK(bethe_sum_B(fx.chain, fx.w, two) == bethe_sum_B(fx.chain, fx.w, BetheLabel{two.u, reversed(two.v)}));
}

TEST_CASE("shared parameters reduce through T13") {
    Fixture fx(4, 3);
    const BetheLabel base = fx.label(2, 1, 11);
    const Scalar z = sample_generic(1, fx.ctx, 12, base.u.joined(base.v).joined(fx.chain.theta()))[0];
    const BetheLabel shared{base.u.joined(VarSet{z}), VarSet{z}.joined(base.v)};
    const StateVector lhs = scaled(bethe_sum_A(fx.chain, fx.w, shared),
                                   fx.w.lambda2(z) * prod_eval(AuxKind::h, base.v, z, fx.ctx));
    CHECK(lhs == apply_entry(fx.chain, 1, 3, z, bethe_sum_A(fx.chain, fx.w, base)));
    CHECK(bethe_recursive(fx.chain, fx.w, shared) == bethe_sum_B(fx.chain, fx.w, shared));
    CHECK_THROWS_AS(bethe_sum_A(fx.chain, fx.w, BetheLabel{VarSet{z, z}, VarSet{}}), PoleError);
}

TEST_CASE("linear combinations") {
    Fixture fx(3);
    const BetheLabel lbl = fx.label(2, 1, 3);
    LinearCombo none;
    CHECK(expand_combo(fx.chain, fx.w, none) == fx.chain.zero());

    LinearCombo single;
    single.add(Scalar(1), lbl);
    CHECK(expand_combo(fx.chain, fx.w, single) == bethe_sum_A(fx.chain, fx.w, lbl));

    LinearCombo cancel;
    cancel.add(Scalar(1), lbl);
    cancel.add(Scalar(-1), BetheLabel{reversed(lbl.u), lbl.v});
    CHECK(cancel.empty());
    CHECK(expand_combo(fx.chain, fx.w, cancel) == fx.chain.zero());

    LinearCombo two;
    two.add(q(1, 2), lbl);
    two.add(Scalar(0), fx.label(1, 0, 4));
    two.add(q(1, 2), lbl);
    REQUIRE(two.size() == 1);
    CHECK(two.terms()[0].coeff == Scalar(1));
}

TEST_CASE("numeric mode tracks exact mode") {
    Fixture fx(3);
    const BetheLabel lbl = fx.label(2, 1, 21);
    const StateVector ex = bethe_sum_A(fx.chain, fx.w, lbl);
    const EvalContext nu(Scalar(1), Mode::numeric);
    const ChainRep nchain(fx.chain.theta().with_mode(Mode::numeric), {q(3, 2), Scalar(1), Scalar(2)}, nu);
    const StateVector nv =
        bethe_sum_B(nchain, chain_weights(nchain), BetheLabel{lbl.u.with_mode(Mode::numeric), lbl.v.with_mode(Mode::numeric)});
    double worst = 0, scale = 0;
    for (std::size_t k = 0; k < ex.size(); ++k) {
        worst = std::max(worst, std::abs(ex[k].to_complex() - nv[k].to_complex()));
        scale = std::max(scale, std::abs(ex[k].to_complex()));
    }
    CHECK(worst <= 1e-10 * scale);
}
