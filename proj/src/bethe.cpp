#include "superbethe/bethe.hpp"

#include <algorithm>
#include <optional>
#include <sstream>

#include "superbethe/izergin.hpp"

namespace superbethe {

namespace {

std::string sorted_key(const VarSet& s) {
    std::string out;
    for (const auto& x : s.sorted_values()) {
        if (!out.empty())
            out += ',';
        out += x.str();
    }
    return out;
}

} // namespace

std::string BetheLabel::key() const { return sorted_key(u) + ";" + sorted_key(v); }

std::string BetheLabel::str() const { return "B_{" + std::to_string(a()) + "," + std::to_string(b()) + "}(" + u.str() + "; " + v.str() + ")"; }

bool BetheLabel::same_as(const BetheLabel& other) const { return u.same_values(other.u) && v.same_values(other.v); }

// ---------------------------------------------------------------------------
// LinearCombo

void LinearCombo::add(const Scalar& coeff, const BetheLabel& label) {
    if (coeff.is_zero())
        return;
    const std::string key = label.key();
    auto it = std::lower_bound(terms_.begin(), terms_.end(), key,
                               [](const ComboTerm& t, const std::string& k) { return t.label.key() < k; });
    if (it != terms_.end() && it->label.key() == key) {
        it->coeff += coeff;
        if (it->coeff.is_zero())
            terms_.erase(it);
        return;
    }
    terms_.insert(it, ComboTerm{coeff, label});
}

void LinearCombo::add(const LinearCombo& other, const Scalar& scale) {
    for (const auto& t : other.terms_)
        add(t.coeff * scale, t.label);
}

std::string LinearCombo::str() const {
    if (terms_.empty())
        return "0";
    std::ostringstream os;
    for (std::size_t k = 0; k < terms_.size(); ++k)
        os << (k ? " + " : "") << "(" << terms_[k].coeff.str() << ") " << terms_[k].label.str();
    return os.str();
}

const char* route_name(BetheRoute route) {
    switch (route) {
    case BetheRoute::sum_a:
        return "sum_a";
    case BetheRoute::sum_b:
        return "sum_b";
    case BetheRoute::recursive:
        return "recursive";
    }
    return "?";
}

// ---------------------------------------------------------------------------
// constructors

namespace {

std::uint64_t mask_of(const VarSet& s) {
    std::uint64_t m = 0;
    for (auto id : s.ids())
        m |= std::uint64_t{1} << id;
    return m;
}

/// Fresh copy whose ids are the positions 0..n-1.
VarSet renumbered(const VarSet& s, Mode mode) {
    return VarSet(std::vector<Scalar>(s.begin(), s.end())).with_mode(mode);
}

struct Shared {
    Scalar z;
    BetheLabel rest;
};

std::optional<Shared> find_shared(const BetheLabel& label) {
    for (std::size_t i = 0; i < label.u.size(); ++i)
        for (std::size_t j = 0; j < label.v.size(); ++j)
            if (label.u[i] == label.v[j])
                return Shared{label.u[i], BetheLabel{label.u.without(i), label.v.without(j)}};
    return std::nullopt;
}

/// T_13(z) psi / (lambda_2(z) h(v',z))
StateVector attach_shared(const ChainRep& chain, const WeightProvider& w, const Scalar& z, const VarSet& v_rest,
                          const StateVector& psi) {
    const Scalar norm = w.lambda2_of(VarSet{z}) * prod_eval(AuxKind::h, v_rest, z, chain.ctx());
    if (norm.is_zero())
        throw PoleError("h(" + v_rest.str() + ", " + z.str() + ") vanishes in the shared-parameter reduction");
    return scaled(apply_entry(chain, 1, 3, z, psi), Scalar(1) / norm);
}

void check_distinct(const VarSet& s, const char* name) {
    for (std::size_t i = 0; i < s.size(); ++i)
        for (std::size_t j = i + 1; j < s.size(); ++j)
            if (s[i] == s[j])
                throw PoleError(std::string("Bethe parameters in ") + name + " coincide: " + s.str());
}

template <class Direct>
StateVector with_reduction(const ChainRep& chain, const WeightProvider& w, const BetheLabel& label, Direct direct) {
    check_distinct(label.u, "u");
    check_distinct(label.v, "v");
    if (auto shared = find_shared(label)) {
        const StateVector inner = with_reduction(chain, w, shared->rest, direct);
        return attach_shared(chain, w, shared->z, shared->rest.v, inner);
    }
    if (label.u.size() > 30 || label.v.size() > 30)
        throw SizeMismatch("Bethe label too large");
    const Mode m = chain.ctx().mode();
    return direct(renumbered(label.u, m), renumbered(label.v, m));
}

class Cache {
public:
    template <class Build>
    const StateVector& get(std::uint64_t a, std::uint64_t b, Build build) {
        const auto key = std::make_pair(a, b);
        auto it = map_.find(key);
        if (it == map_.end())
            it = map_.emplace(key, build()).first;
        return it->second;
    }

private:
    std::map<std::pair<std::uint64_t, std::uint64_t>, StateVector> map_;
};

StateVector sum_a_direct(const ChainRep& chain, const WeightProvider& w, const VarSet& u, const VarSet& v) {
    const EvalContext& ctx = chain.ctx();
    const std::size_t a = u.size(), b = v.size();
    const Scalar denom_common = w.lambda2_of(u) * prod_eval(AuxKind::f, v, u, ctx);
    Cache t23, inner;
    StateVector total = chain.zero();
    for (std::size_t n = 0; n <= std::min(a, b); ++n) {
        const std::size_t usizes[] = {n, a - n};
        const std::size_t vsizes[] = {n, b - n};
        for_each_partition(u, usizes, [&](std::span<const VarSet> up) {
            const VarSet &uI = up[0], &uII = up[1];
            StateVector acc = chain.zero();
            for_each_partition(v, vsizes, [&](std::span<const VarSet> vp) {
                const VarSet &vI = vp[0], &vII = vp[1];
                const Scalar coeff = prod_eval(AuxKind::g, vI, uI, ctx) * prod_eval(AuxKind::f, uI, uII, ctx) *
                                     prod_eval(AuxKind::g, vII, vI, ctx) * prod_eval(AuxKind::h, uI, uI, ctx) /
                                     (denom_common * w.lambda2_of(vII));
                const StateVector& vec = inner.get(mask_of(uII), mask_of(vII), [&] {
                    const StateVector& base = t23.get(0, mask_of(vII), [&] {
                        return apply_product(chain, 2, 3, vII, chain.vacuum());
                    });
                    return apply_product(chain, 1, 2, uII, base);
                });
                axpy(acc, coeff, vec);
            });
            axpy(total, Scalar(1), apply_product(chain, 1, 3, uI, acc));
        });
    }
    return total;
}

StateVector sum_b_direct(const ChainRep& chain, const WeightProvider& w, const VarSet& u, const VarSet& v) {
    const EvalContext& ctx = chain.ctx();
    const std::size_t a = u.size(), b = v.size();
    const Scalar denom_common = w.lambda2_of(v) * prod_eval(AuxKind::f, v, u, ctx);
    Cache t12, inner;
    StateVector total = chain.zero();
    for (std::size_t n = 0; n <= std::min(a, b); ++n) {
        const std::size_t usizes[] = {n, a - n};
        const std::size_t vsizes[] = {n, b - n};
        for_each_partition(v, vsizes, [&](std::span<const VarSet> vp) {
            const VarSet &vI = vp[0], &vII = vp[1];
            StateVector acc = chain.zero();
            for_each_partition(u, usizes, [&](std::span<const VarSet> up) {
                const VarSet &uI = up[0], &uII = up[1];
                const Scalar coeff = izergin(vI, uI, ctx) * prod_eval(AuxKind::f, uI, uII, ctx) *
                                     prod_eval(AuxKind::g, vII, vI, ctx) / (denom_common * w.lambda2_of(uII));
                const StateVector& vec = inner.get(mask_of(uII), mask_of(vII), [&] {
                    const StateVector& base = t12.get(mask_of(uII), 0, [&] {
                        return apply_product(chain, 1, 2, uII, chain.vacuum());
                    });
                    return apply_product(chain, 2, 3, vII, base);
                });
                axpy(acc, coeff, vec);
            });
            axpy(total, Scalar(1), apply_product(chain, 1, 3, vI, acc));
        });
    }
    return total;
}

StateVector recursive_direct(const ChainRep& chain, const WeightProvider& w, const VarSet& u, const VarSet& v) {
    const EvalContext& ctx = chain.ctx();
    Cache memo;
    auto top_bit = [](std::uint64_t m) {
        std::size_t k = 0;
        while ((m >> (k + 1)) != 0)
            ++k;
        return k;
    };
    std::function<StateVector(std::uint64_t, std::uint64_t)> rec = [&](std::uint64_t mu, std::uint64_t mv) -> StateVector {
        return memo.get(mu, mv, [&]() -> StateVector {
            if (mu == 0 && mv == 0)
                return chain.vacuum();
            const VarSet vs = v.subset(mv);
            if (mu == 0) {
                // T_23(z) B_{0,b}(;v') = lambda_2(z) h(v',z) B_{0,b+1}(;{v',z})
                const std::size_t k = top_bit(mv);
                const Scalar& z = v[k];
                const std::uint64_t rest = mv & ~(std::uint64_t{1} << k);
                const Scalar norm = w.lambda2_of(VarSet{z}) * prod_eval(AuxKind::h, v.subset(rest), z, ctx);
                return scaled(apply_entry(chain, 2, 3, z, rec(0, rest)), Scalar(1) / norm);
            }
            // T_12(z) B_{a,b}(u';v) = lambda_2(z) f(v,z) B_{a+1,b}({u',z};v)
            //   + sum_j g(z,v_j) g(v_j^c,v_j) T_13(z) B_{a,b-1}(u';v_j^c)
            const std::size_t k = top_bit(mu);
            const Scalar& z = u[k];
            const std::uint64_t urest = mu & ~(std::uint64_t{1} << k);
            StateVector out = apply_entry(chain, 1, 2, z, rec(urest, mv));
            StateVector corr = chain.zero();
            for (std::size_t j = 0; j < v.size(); ++j) {
                if (!(mv & (std::uint64_t{1} << j)))
                    continue;
                const std::uint64_t vrest = mv & ~(std::uint64_t{1} << j);
                const Scalar coeff = aux_eval(AuxKind::g, z, v[j], ctx) * prod_eval(AuxKind::g, v.subset(vrest), v[j], ctx);
                axpy(corr, coeff, rec(urest, vrest));
            }
            if (mv != 0)
                axpy(out, Scalar(-1), apply_entry(chain, 1, 3, z, corr));
            const Scalar norm = w.lambda2_of(VarSet{z}) * prod_eval(AuxKind::f, vs, z, ctx);
            return scaled(std::move(out), Scalar(1) / norm);
        });
    };
    const std::uint64_t all_u = (std::uint64_t{1} << u.size()) - 1;
    const std::uint64_t all_v = (std::uint64_t{1} << v.size()) - 1;
    return rec(all_u, all_v);
}

} // namespace

StateVector bethe_sum_A(const ChainRep& chain, const WeightProvider& w, const BetheLabel& label) {
    return with_reduction(chain, w, label,
                          [&](const VarSet& u, const VarSet& v) { return sum_a_direct(chain, w, u, v); });
}

StateVector bethe_sum_B(const ChainRep& chain, const WeightProvider& w, const BetheLabel& label) {
    return with_reduction(chain, w, label,
                          [&](const VarSet& u, const VarSet& v) { return sum_b_direct(chain, w, u, v); });
}

StateVector bethe_recursive(const ChainRep& chain, const WeightProvider& w, const BetheLabel& label) {
    return with_reduction(chain, w, label,
                          [&](const VarSet& u, const VarSet& v) { return recursive_direct(chain, w, u, v); });
}

StateVector bethe_vector(const ChainRep& chain, const WeightProvider& w, const BetheLabel& label, BetheRoute route) {
    switch (route) {
    case BetheRoute::sum_a:
        return bethe_sum_A(chain, w, label);
    case BetheRoute::sum_b:
        return bethe_sum_B(chain, w, label);
    case BetheRoute::recursive:
        return bethe_recursive(chain, w, label);
    }
    return chain.zero();
}

// ---------------------------------------------------------------------------
// factory

BetheFactory::BetheFactory(const ChainRep& chain, WeightProvider weights, BetheRoute route)
    : chain_(chain), weights_(std::move(weights)), route_(route) {}

const StateVector& BetheFactory::vector(const BetheLabel& label) {
    const std::string key = label.key();
    auto it = cache_.find(key);
    if (it == cache_.end())
        it = cache_.emplace(key, bethe_vector(chain_, weights_, label, route_)).first;
    return it->second;
}

StateVector BetheFactory::expand(const LinearCombo& combo) {
    StateVector out = chain_.zero();
    for (const auto& t : combo.terms())
        axpy(out, t.coeff, vector(t.label));
    return out;
}

StateVector expand_combo(const ChainRep& chain, const WeightProvider& w, const LinearCombo& combo) {
    BetheFactory factory(chain, w);
    return factory.expand(combo);
}

} // namespace superbethe
