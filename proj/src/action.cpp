#include "superbethe/action.hpp"

#include "superbethe/izergin.hpp"

namespace superbethe {

std::string OperatorId::name() const { return "T" + std::to_string(i) + std::to_string(j); }

const std::array<std::pair<int, int>, 9>& all_entries() {
    static const std::array<std::pair<int, int>, 9> entries{
        {{1, 3}, {1, 2}, {2, 3}, {1, 1}, {2, 2}, {3, 3}, {2, 1}, {3, 2}, {3, 1}}};
    return entries;
}

namespace {

struct Sets {
    const ActionInput& in;
    std::size_t n, a, b;
    VarSet eta, xi;

    explicit Sets(const ActionInput& input)
        : in(input), n(input.z.size()), a(input.label.a()), b(input.label.b()),
          eta(input.label.u.joined(input.z)), xi(input.label.v.joined(input.z)) {
        if (input.op.n < 1)
            throw SizeMismatch("action multiplicity must be at least 1");
        if (input.z.size() != input.op.n)
            throw SizeMismatch("#z = " + std::to_string(input.z.size()) + " but n = " + std::to_string(input.op.n));
    }

    /// lambda_2(z) h(hset, z)
    FactorProduct base(const VarSet& hset) const {
        FactorProduct c(in.ctx);
        c.scale(in.weights.lambda2_of(in.z));
        c.mul(AuxKind::h, hset, in.z);
        return c;
    }

    Scalar izergin_shifted(const VarSet& x, const VarSet& y) const { return izergin(x, y.shifted(in.ctx.c()), in.ctx); }
};

Scalar sign_pow(std::size_t e) { return Scalar(e % 2 == 0 ? 1 : -1); }

void require(bool ok, const char* what) {
    if (!ok)
        throw Error(what);
}

} // namespace

LinearCombo act_upper(const ActionInput& in) {
    const Sets s(in);
    const auto& op = in.op;
    LinearCombo out;
    if (op.i == 1 && op.j == 3) {
        out.add(s.base(in.label.v).evaluate(), BetheLabel{s.eta, s.xi});
    } else if (op.i == 1 && op.j == 2) {
        const std::size_t sizes[] = {s.n, s.b};
        for_each_partition(s.xi, sizes, [&](std::span<const VarSet> x) {
            FactorProduct c = s.base(s.xi);
            c.mul(AuxKind::g, x[1], x[0]).div(AuxKind::h, x[0], in.z);
            out.add(c.evaluate(), BetheLabel{s.eta, x[1]});
        });
    } else if (op.i == 2 && op.j == 3) {
        const std::size_t sizes[] = {s.n, s.a};
        for_each_partition(s.eta, sizes, [&](std::span<const VarSet> e) {
            FactorProduct c = s.base(in.label.v);
            c.scale(sign_pow(s.n) * s.izergin_shifted(in.z, e[0]));
            c.mul(AuxKind::f, e[0], e[1]);
            out.add(c.evaluate(), BetheLabel{e[1], s.xi});
        });
    } else {
        require(false, "act_upper: entry is not T13, T12 or T23");
    }
    return out;
}

LinearCombo act_diag(const ActionInput& in) {
    require(in.op.i == in.op.j, "act_diag: entry is not diagonal");
    const Sets s(in);
    const int k = in.op.i;
    LinearCombo out;
    const std::size_t xsizes[] = {s.n, s.b};
    const std::size_t esizes[] = {s.n, s.a};
    for_each_partition(s.xi, xsizes, [&](std::span<const VarSet> x) {
        const VarSet &xI = x[0], &xII = x[1];
        for_each_partition(s.eta, esizes, [&](std::span<const VarSet> e) {
            const VarSet &eI = e[0], &eII = e[1];
            FactorProduct c = s.base(s.xi);
            if (k == 1) {
                c.scale(sign_pow(s.n) * in.weights.r1_of(eI) * s.izergin_shifted(eI, xI));
                c.mul(AuxKind::f, eII, eI).mul(AuxKind::g, xII, xI);
                c.div(AuxKind::h, xI, in.z).div(AuxKind::f, xII, eI);
            } else if (k == 2) {
                c.scale(sign_pow(s.n) * s.izergin_shifted(in.z, eI));
                c.mul(AuxKind::f, eI, eII).mul(AuxKind::g, xII, xI);
                c.div(AuxKind::h, xI, in.z);
            } else {
                c.scale(in.weights.r3_of(xI));
                c.mul(AuxKind::f, eI, eII).mul(AuxKind::g, xII, xI).mul(AuxKind::h, eI, eI);
                c.div(AuxKind::h, xI, eI).div(AuxKind::h, eI, in.z).div(AuxKind::f, xI, eII);
            }
            out.add(c.evaluate(), BetheLabel{eII, xII});
        });
    });
    return out;
}

LinearCombo act_lower(const ActionInput& in) {
    const Sets s(in);
    const auto& op = in.op;
    const std::size_t n = s.n;
    LinearCombo out;
    if (op.i == 2 && op.j == 1) {
        if (s.a < n)
            return out;
        const std::size_t xsizes[] = {n, s.b};
        const std::size_t esizes[] = {n, n, s.a - n};
        for_each_partition(s.xi, xsizes, [&](std::span<const VarSet> x) {
            const VarSet &xI = x[0], &xII = x[1];
            for_each_partition(s.eta, esizes, [&](std::span<const VarSet> e) {
                const VarSet &eI = e[0], &eII = e[1], &eIII = e[2];
                FactorProduct c = s.base(s.xi);
                c.scale(in.weights.r1_of(eI) * s.izergin_shifted(in.z, eII) * s.izergin_shifted(eI, xI));
                c.mul(AuxKind::f, eII, eI).mul(AuxKind::f, eII, eIII).mul(AuxKind::f, eIII, eI);
                c.mul(AuxKind::g, xII, xI);
                c.div(AuxKind::h, xI, in.z).div(AuxKind::f, xII, eI);
                out.add(c.evaluate(), BetheLabel{eIII, xII});
            });
        });
    } else if (op.i == 3 && op.j == 2) {
        if (s.b < n)
            return out;
        const std::size_t xsizes[] = {n, n, s.b - n};
        const std::size_t esizes[] = {n, s.a};
        for_each_partition(s.xi, xsizes, [&](std::span<const VarSet> x) {
            const VarSet &xI = x[0], &xII = x[1], &xIII = x[2];
            for_each_partition(s.eta, esizes, [&](std::span<const VarSet> e) {
                const VarSet &eI = e[0], &eII = e[1];
                FactorProduct c = s.base(s.xi);
                c.scale(sign_pow(n * (n - 1) / 2) * in.weights.r3_of(xI));
                c.mul(AuxKind::f, eI, eII).mul(AuxKind::h, eI, eI);
                c.mul(AuxKind::g, xII, xI).mul(AuxKind::g, xIII, xII).mul(AuxKind::g, xIII, xI);
                c.div(AuxKind::h, eI, in.z).div(AuxKind::h, xI, eI).div(AuxKind::h, xII, in.z);
                c.div(AuxKind::f, xI, eII);
                out.add(c.evaluate(), BetheLabel{eII, xIII});
            });
        });
    } else if (op.i == 3 && op.j == 1) {
        if (s.a < n || s.b < n)
            return out;
        const std::size_t xsizes[] = {n, n, s.b - n};
        const std::size_t esizes[] = {n, n, s.a - n};
        for_each_partition(s.xi, xsizes, [&](std::span<const VarSet> x) {
            const VarSet &xI = x[0], &xII = x[1], &xIII = x[2];
            for_each_partition(s.eta, esizes, [&](std::span<const VarSet> e) {
                const VarSet &eI = e[0], &eII = e[1], &eIII = e[2];
                FactorProduct c = s.base(s.xi);
                c.scale(sign_pow(n * (n + 1) / 2) * in.weights.r3_of(xI) * in.weights.r1_of(eII) *
                        s.izergin_shifted(eII, xII));
                c.mul(AuxKind::g, xII, xI).mul(AuxKind::g, xIII, xII).mul(AuxKind::g, xIII, xI);
                c.div(AuxKind::h, eI, in.z).div(AuxKind::h, xI, eI).div(AuxKind::h, xII, in.z);
                c.mul(AuxKind::f, eI, eII).mul(AuxKind::f, eI, eIII).mul(AuxKind::f, eIII, eII);
                c.mul(AuxKind::h, eI, eI);
                c.div(AuxKind::f, xI, eII).div(AuxKind::f, xI, eIII).div(AuxKind::f, xIII, eII);
                out.add(c.evaluate(), BetheLabel{eIII, xIII});
            });
        });
    } else {
        require(false, "act_lower: entry is not T21, T32 or T31");
    }
    return out;
}

LinearCombo act(const ActionInput& in) {
    const int i = in.op.i, j = in.op.j;
    if (i == j)
        return act_diag(in);
    return i < j ? act_upper(in) : act_lower(in);
}

StateVector action_lhs(const ChainRep& chain, const ActionInput& in, BetheFactory& factory) {
    return apply_product(chain, in.op.i, in.op.j, in.z, factory.vector(in.label));
}

ActionCheck verify_action(const ChainRep& chain, const ActionInput& in, BetheFactory& factory) {
    const StateVector lhs = action_lhs(chain, in, factory);
    const LinearCombo combo = act(in);
    ActionCheck out;
    out.residual = max_abs(difference(lhs, factory.expand(combo)));
    out.lhs_nonzero = !max_abs(lhs).is_zero();
    out.terms = combo.size();
    return out;
}

Scalar verify_action(const ChainRep& chain, const ActionInput& in) {
    BetheFactory factory(chain, in.weights);
    return verify_action(chain, in, factory).residual;
}

} // namespace superbethe
