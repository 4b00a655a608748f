#include <set>

#include "support.hpp"

using namespace superbethe;
using sbtest::q;

TEST_CASE("scalar canonical form") {
    CHECK(Scalar(0).str() == "0/1+0/1 i");
    CHECK(q(6, 4).str() == "3/2+0/1 i");
    CHECK(Scalar::parse("3/2-1/3 i") == Scalar(GaussRational(mpq_class(3, 2), mpq_class(-1, 3))));
    CHECK(Scalar::parse(Scalar::parse("-7/5+2/9 i").str()).str() == "-7/5+2/9 i");
    CHECK(Scalar::parse("4") == Scalar(4));
    CHECK_THROWS_AS(Scalar(1) / Scalar(0), PoleError);
}

TEST_CASE("scalar arithmetic is exact") {
    const Scalar i = Scalar::parse("0/1+1/1 i");
    CHECK(i * i == Scalar(-1));
    CHECK((q(1, 3) + q(1, 6)) == q(1, 2));
    CHECK(pow(q(2, 3), -2) == q(9, 4));
    CHECK((q(1, 3) - q(1, 3)).is_zero());
    const Scalar mixed = q(1, 2) + Scalar::numeric(0.25);
    CHECK(mixed.mode() == Mode::numeric);
    CHECK(mixed.abs() == doctest::Approx(0.75));
}

TEST_CASE("context rejects c = 0") {
    CHECK_THROWS_AS(EvalContext(Scalar(0)), ConfigError);
}

TEST_CASE("aux_eval examples") {
    const EvalContext c2(Scalar(2));
    CHECK(aux_eval(AuxKind::g, Scalar(3), Scalar(1), c2) == Scalar(1));
    const EvalContext c1(Scalar(1));
    CHECK(aux_eval(AuxKind::g, Scalar(1), Scalar(2), c1) == -aux_eval(AuxKind::g, Scalar(2), Scalar(1), c1));
    CHECK(aux_eval(AuxKind::h, q(7, 3), q(7, 3), c1) == Scalar(1));
    CHECK_THROWS_AS(aux_eval(AuxKind::g, Scalar(1), Scalar(1), c1), PoleError);
    CHECK_THROWS_AS(aux_eval(AuxKind::t, Scalar(1), Scalar(2), c1), PoleError);
    CHECK_NOTHROW(aux_eval(AuxKind::h, Scalar(1), Scalar(2), c1));
}

TEST_CASE("aux function relations hold on random points") {
    for (long c_num : {1L, 2L}) {
        const EvalContext ctx(q(c_num, 3));
        for (std::uint64_t seed = 0; seed < 20; ++seed) {
            const VarSet p = sample_generic(2, ctx, seed, {});
            const Scalar &x = p[0], &y = p[1];
            CHECK(aux_eval(AuxKind::g, x, y, ctx) == -aux_eval(AuxKind::g, y, x, ctx));
            CHECK(aux_eval(AuxKind::f, x - ctx.c(), y, ctx) * aux_eval(AuxKind::f, y, x, ctx) == Scalar(1));
            CHECK(aux_eval(AuxKind::h, x, y, ctx) * aux_eval(AuxKind::g, x, y - ctx.c(), ctx) == Scalar(1));
            CHECK(aux_eval(AuxKind::h, x, y, ctx) ==
                  aux_eval(AuxKind::f, x, y, ctx) / aux_eval(AuxKind::g, x, y, ctx));
            CHECK(aux_eval(AuxKind::t, x, y, ctx) ==
                  aux_eval(AuxKind::g, x, y, ctx) / aux_eval(AuxKind::h, x, y, ctx));
        }
    }
}

TEST_CASE("prod_eval") {
    const EvalContext ctx(Scalar(1));
    CHECK(prod_eval(AuxKind::f, VarSet{}, VarSet{Scalar(3)}, ctx) == Scalar(1));
    CHECK(prod_eval(AuxKind::g, VarSet{Scalar(3)}, VarSet{Scalar(1), Scalar(2)}, ctx) == q(1, 2));
    const Scalar x = q(5, 2), y = q(-1, 3);
    CHECK(prod_eval(AuxKind::h, VarSet{x}, VarSet{y}, ctx) == Scalar(1) / aux_eval(AuxKind::g, x, y - ctx.c(), ctx));
    CHECK_THROWS_AS(prod_eval(AuxKind::g, VarSet{Scalar(1)}, VarSet{Scalar(2), Scalar(1)}, ctx), PoleError);

    const VarSet all = sample_generic(6, ctx, 11, {});
    const VarSet a = all.subset(0b000011), b = all.subset(0b001100), cset = all.subset(0b110000);
    for (auto kind : {AuxKind::g, AuxKind::f, AuxKind::h, AuxKind::t})
        CHECK(prod_eval(kind, a.joined(b), cset, ctx) == prod_eval(kind, a, cset, ctx) * prod_eval(kind, b, cset, ctx));
}

TEST_CASE("partitions enumerate labeled blocks once") {
    const VarSet w{Scalar(1), Scalar(2), Scalar(3)};
    const auto p = partitions(w, {1, 2});
    REQUIRE(p.size() == 3);
    CHECK(p[0][0].same_values(VarSet{Scalar(1)}));
    CHECK(p[0][1].same_values(VarSet{Scalar(2), Scalar(3)}));
    CHECK(p[1][0].same_values(VarSet{Scalar(2)}));
    CHECK(p[2][0].same_values(VarSet{Scalar(3)}));
    CHECK(p[2][1][0] == Scalar(1));

    CHECK(partitions(VarSet{}, std::initializer_list<std::size_t>{}).size() == 1);
    CHECK(partitions(VarSet{Scalar(1), Scalar(2), Scalar(3), Scalar(4)}, {2, 2}).size() == 6);
    CHECK_THROWS_AS(partitions(w, {1, 1}), SizeMismatch);

    const VarSet six = VarSet(std::vector<Scalar>{1, 2, 3, 4, 5, 6});
    const std::size_t sizes[] = {2, 1, 3};
    std::set<std::string> seen;
    std::size_t count = 0;
    for_each_partition(six, sizes, [&](std::span<const VarSet> blocks) {
        std::string key;
        for (const auto& b : blocks) {
            for (std::size_t k = 0; k < b.size(); ++k) {
                if (k > 0)
                    CHECK(b.id(k - 1) < b.id(k));
                key += std::to_string(b.id(k));
            }
            key += "|";
        }
        seen.insert(key);
        ++count;
    });
    CHECK(count == 60);
    CHECK(seen.size() == 60);
    CHECK(multinomial(6, sizes) == 60);
}

TEST_CASE("sample_generic") {
    const EvalContext ctx(Scalar(1));
    CHECK(sample_generic(0, ctx, 1, {}).empty());
    const VarSet forbidden{Scalar(0), Scalar(2)};
    const VarSet s = sample_generic(3, ctx, 7, forbidden);
    REQUIRE(s.size() == 3);
    const VarSet all = s.joined(forbidden);
    for (std::size_t i = 0; i < all.size(); ++i)
        for (std::size_t j = i + 1; j < all.size(); ++j) {
            const Scalar d = all[i] - all[j];
            CHECK_FALSE(d.is_zero());
            CHECK_FALSE((d - Scalar(1)).is_zero());
            CHECK_FALSE((d + Scalar(1)).is_zero());
        }
    const VarSet again = sample_generic(3, ctx, 7, forbidden);
    for (std::size_t k = 0; k < 3; ++k)
        CHECK(again[k] == s[k]);
}

TEST_CASE("FactorProduct cancels structural zeros") {
    const EvalContext ctx(Scalar(1));
    const Scalar z = q(3, 7);
    FactorProduct fp(ctx);
    // g(z,z) / f(z,z) as a ratio of linear forms: c / (0 + c) after cancellation
    fp.mul(AuxKind::g, z, z).div(AuxKind::f, z, z);
    CHECK(fp.evaluate() == Scalar(1));

    FactorProduct zero(ctx);
    zero.mul(AuxKind::h, z, z + Scalar(1));
    CHECK(zero.evaluate().is_zero());

    FactorProduct pole(ctx);
    pole.mul(AuxKind::g, z, z);
    CHECK_THROWS_AS(pole.evaluate(), PoleError);

    const Scalar x = q(1, 2), y = q(-4, 3);
    FactorProduct mirrored(ctx);
    mirrored.mul(AuxKind::g, x, y).mul(AuxKind::g, y, x);
    CHECK(mirrored.evaluate() == aux_eval(AuxKind::g, x, y, ctx) * aux_eval(AuxKind::g, y, x, ctx));
}
