#include "superbethe/action.hpp"

#include "support.hpp"

using namespace superbethe;
using sbtest::q;

namespace {

struct Fixture {
    EvalContext ctx{Scalar(1)};
    ChainRep chain;
    WeightProvider w;
    BetheFactory factory;
    explicit Fixture(std::size_t L, std::uint64_t seed = 1)
        : chain(sample_generic(L, ctx, seed, {}), {q(3, 2), Scalar(1), Scalar(2)}, ctx), w(chain_weights(chain)),
          factory(chain, w) {}

    ActionInput input(int i, int j, std::size_t n, std::size_t a, std::size_t b, std::uint64_t seed) const {
        const VarSet p = sample_generic(n + a + b, ctx, seed, chain.theta());
        const auto block = [&](std::size_t len, std::size_t off) {
            return p.subset(((std::uint64_t{1} << len) - 1) << off);
        };
        return ActionInput{OperatorId{i, j, n}, block(n, 0), BetheLabel{block(a, n), block(b, n + a)}, w, ctx};
    }
};

} // namespace

TEST_CASE("all nine actions match the chain for n = 1, 2") {
    Fixture fx(5);
    std::uint64_t seed = 100;
    for (auto [i, j] : all_entries())
        for (std::size_t n = 1; n <= 2; ++n)
            for (std::size_t a = 0; a <= 2; ++a)
                for (std::size_t b = 0; b <= a; ++b) {
                    if (a + n > 5)
                        continue;
                    CAPTURE(i);
                    CAPTURE(j);
                    CAPTURE(n);
                    CAPTURE(a);
                    CAPTURE(b);
                    const ActionInput in = fx.input(i, j, n, a, b, ++seed);
                    const ActionCheck check = verify_action(fx.chain, in, fx.factory);
                    CHECK(check.residual.is_zero());
                }
}

TEST_CASE("T13 on the vacuum") {
    Fixture fx(3);
    const ActionInput in = fx.input(1, 3, 1, 0, 0, 7);
    const LinearCombo out = act_upper(in);
    REQUIRE(out.size() == 1);
    CHECK(out.terms()[0].coeff == fx.w.lambda2(in.z[0]));
    CHECK(out.terms()[0].label.same_as(BetheLabel{in.z, in.z}));
}

TEST_CASE("T23 on B_{1,0}") {
    Fixture fx(3);
    const ActionInput in = fx.input(2, 3, 1, 1, 0, 8);
    const LinearCombo out = act_upper(in);
    REQUIRE(out.size() == 2);
    const Scalar z = in.z[0];
    const Scalar u = in.label.u[0];
    // partition eta_I = {z} leaves B_{1,1}(u; z)
    const BetheLabel kept{VarSet{u}, VarSet{z}};
    bool found = false;
    for (const auto& t : out.terms())
        if (t.label.same_as(kept)) {
            found = true;
            CHECK(t.coeff == fx.w.lambda2(z) * aux_eval(AuxKind::f, z, u, fx.ctx));
        }
    CHECK(found);
}

TEST_CASE("T22 on the vacuum and on B_{0,1}") {
    Fixture fx(3);
    const ActionInput vac = fx.input(2, 2, 1, 0, 0, 9);
    const LinearCombo out = act_diag(vac);
    REQUIRE(out.size() == 1);
    CHECK(out.terms()[0].coeff == fx.w.lambda2(vac.z[0]));
    CHECK(out.terms()[0].label.a() == 0);
    CHECK(out.terms()[0].label.b() == 0);

    const ActionInput one = fx.input(2, 2, 1, 0, 1, 10);
    CHECK(act_diag(one).size() <= 3);
    CHECK(verify_action(fx.chain, one).is_zero());
}

TEST_CASE("lower actions with too few parameters vanish") {
    Fixture fx(3);
    CHECK(act_lower(fx.input(2, 1, 1, 0, 2, 11)).empty());
    CHECK(act_lower(fx.input(3, 2, 2, 2, 1, 12)).empty());
    CHECK(act_lower(fx.input(3, 1, 1, 0, 1, 13)).empty());
    CHECK(verify_action(fx.chain, fx.input(2, 1, 1, 0, 0, 14)).is_zero());
}

TEST_CASE("term counts are bounded by the partition counts") {
    Fixture fx(4);
    const ActionInput in = fx.input(1, 1, 1, 1, 1, 15);
    CHECK(act_diag(in).size() <= 4);
    const ActionInput t31 = fx.input(3, 1, 1, 2, 2, 16);
    CHECK(act_lower(t31).size() <= 3 * 2 * 3);
}

TEST_CASE("actions do not depend on the order of z") {
    Fixture fx(4);
    for (auto [i, j] : all_entries()) {
        ActionInput in = fx.input(i, j, 2, 2, 1, 17);
        const LinearCombo first = act(in);
        in.z = VarSet{in.z[1], in.z[0]};
        const LinearCombo second = act(in);
        REQUIRE(first.size() == second.size());
        for (std::size_t k = 0; k < first.size(); ++k) {
            CHECK(first.terms()[k].label.same_as(second.terms()[k].label));
            CHECK(first.terms()[k].coeff == second.terms()[k].coeff);
        }
    }
}

TEST_CASE("multiplicity must match the number of points") {
    Fixture fx(3);
    ActionInput in = fx.input(1, 2, 1, 1, 0, 18);
    in.op.n = 2;
    CHECK_THROWS_AS(act(in), SizeMismatch);
}
