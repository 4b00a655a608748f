#include "superbethe/field.hpp"

#include <algorithm>
#include <numeric>
#include <random>
#include <sstream>

namespace superbethe {

EvalContext::EvalContext(Scalar c, Mode mode) : c_(c.to_mode(mode)), mode_(mode) {
    if (c_.is_zero())
        throw ConfigError("c", "deformation constant must be nonzero");
}

// ---------------------------------------------------------------------------
// VarSet

VarSet::VarSet(std::initializer_list<Scalar> xs) : VarSet(std::vector<Scalar>(xs)) {}

VarSet::VarSet(std::vector<Scalar> xs) : elems_(std::move(xs)), ids_(elems_.size()) {
    std::iota(ids_.begin(), ids_.end(), std::size_t{0});
}

VarSet::VarSet(std::vector<Scalar> xs, std::vector<std::size_t> ids)
    : elems_(std::move(xs)), ids_(std::move(ids)) {
    if (elems_.size() != ids_.size())
        throw SizeMismatch("VarSet: value and id counts differ");
}

VarSet VarSet::subset(std::uint64_t mask) const {
    std::vector<Scalar> xs;
    std::vector<std::size_t> ids;
    for (std::size_t k = 0; k < elems_.size(); ++k) {
        if (mask & (std::uint64_t{1} << k)) {
            xs.push_back(elems_[k]);
            ids.push_back(ids_[k]);
        }
    }
    return VarSet(std::move(xs), std::move(ids));
}

VarSet VarSet::without(std::size_t k) const {
    const std::uint64_t all = elems_.size() >= 64 ? ~std::uint64_t{0}
                                                  : (std::uint64_t{1} << elems_.size()) - 1;
    return subset(all & ~(std::uint64_t{1} << k));
}

VarSet VarSet::shifted(const Scalar& by) const {
    VarSet out = *this;
    for (auto& x : out.elems_)
        x += by;
    return out;
}

VarSet VarSet::joined(const VarSet& other) const {
    VarSet out = *this;
    std::size_t offset = 0;
    for (auto id : ids_)
        offset = std::max(offset, id + 1);
    for (std::size_t k = 0; k < other.size(); ++k) {
        out.elems_.push_back(other.elems_[k]);
        out.ids_.push_back(offset + other.ids_[k]);
    }
    return out;
}

VarSet VarSet::with_mode(Mode m) const {
    VarSet out = *this;
    for (auto& x : out.elems_)
        x = x.to_mode(m);
    return out;
}

bool VarSet::contains(const Scalar& x) const {
    return std::any_of(elems_.begin(), elems_.end(), [&](const Scalar& y) { return y == x; });
}

std::vector<Scalar> VarSet::sorted_values() const {
    std::vector<Scalar> xs = elems_;
    std::sort(xs.begin(), xs.end(), value_less);
    return xs;
}

bool VarSet::same_values(const VarSet& other) const {
    if (size() != other.size())
        return false;
    return sorted_values() == other.sorted_values();
}

std::string VarSet::str() const {
    std::ostringstream os;
    os << "{";
    for (std::size_t k = 0; k < elems_.size(); ++k)
        os << (k ? ", " : "") << elems_[k].str();
    os << "}";
    return os.str();
}

// ---------------------------------------------------------------------------
// auxiliary functions

char aux_name(AuxKind kind) {
    switch (kind) {
    case AuxKind::g:
        return 'g';
    case AuxKind::f:
        return 'f';
    case AuxKind::h:
        return 'h';
    case AuxKind::t:
        return 't';
    }
    return '?';
}

namespace {

[[noreturn]] void pole(AuxKind kind, const Scalar& x, const Scalar& y) {
    throw PoleError(std::string(1, aux_name(kind)) + "(" + x.str() + ", " + y.str() + ") has a pole");
}

} // namespace

Scalar aux_eval(AuxKind kind, const Scalar& x, const Scalar& y, const EvalContext& ctx) {
    const Scalar& c = ctx.c();
    const Scalar d = x - y;
    switch (kind) {
    case AuxKind::g:
        if (d.is_zero())
            pole(kind, x, y);
        return c / d;
    case AuxKind::f:
        if (d.is_zero())
            pole(kind, x, y);
        return (d + c) / d;
    case AuxKind::h:
        return (d + c) / c;
    case AuxKind::t: {
        const Scalar e = d + c;
        if (d.is_zero() || e.is_zero())
            pole(kind, x, y);
        return c * c / (d * e);
    }
    }
    return {};
}

Scalar prod_eval(AuxKind kind, const VarSet& a, const VarSet& b, const EvalContext& ctx) {
    Scalar out(1);
    out = ctx.lift(out);
    for (const auto& x : a)
        for (const auto& y : b)
            out *= aux_eval(kind, x, y, ctx);
    return out;
}

Scalar prod_eval(AuxKind kind, const Scalar& x, const VarSet& b, const EvalContext& ctx) {
    return prod_eval(kind, VarSet{x}, b, ctx);
}

Scalar prod_eval(AuxKind kind, const VarSet& a, const Scalar& y, const EvalContext& ctx) {
    return prod_eval(kind, a, VarSet{y}, ctx);
}

// ---------------------------------------------------------------------------
// FactorProduct

FactorProduct::FactorProduct(const EvalContext& ctx) : ctx_(&ctx), constant_(ctx.lift(Scalar(1))) {}

FactorProduct& FactorProduct::scale(const Scalar& s) {
    constant_ *= s;
    return *this;
}

void FactorProduct::add_linear(const Scalar& x, const Scalar& y, int shift, int power) {
    for (auto& f : factors_) {
        if (f.shift == shift && f.x == x && f.y == y) {
            f.power += power;
            return;
        }
        if (f.shift == -shift && f.x == y && f.y == x) {
            // (y - x - m c) = -(x - y + m c)
            f.power += power;
            if (power % 2 != 0)
                constant_ = -constant_;
            return;
        }
    }
    factors_.push_back({x, y, shift, power});
}

FactorProduct& FactorProduct::mul(AuxKind kind, const Scalar& x, const Scalar& y, int power) {
    switch (kind) {
    case AuxKind::g:
        c_power_ += power;
        add_linear(x, y, 0, -power);
        break;
    case AuxKind::f:
        add_linear(x, y, 1, power);
        add_linear(x, y, 0, -power);
        break;
    case AuxKind::h:
        c_power_ -= power;
        add_linear(x, y, 1, power);
        break;
    case AuxKind::t:
        c_power_ += 2 * power;
        add_linear(x, y, 1, -power);
        add_linear(x, y, 0, -power);
        break;
    }
    return *this;
}

FactorProduct& FactorProduct::mul(AuxKind kind, const VarSet& a, const VarSet& b, int power) {
    for (const auto& x : a)
        for (const auto& y : b)
            mul(kind, x, y, power);
    return *this;
}

Scalar FactorProduct::evaluate() const {
    Scalar value = constant_ * pow(ctx_->c(), c_power_);
    bool zero = false;
    for (const auto& f : factors_) {
        if (f.power == 0)
            continue;
        Scalar lin = f.x - f.y;
        if (f.shift != 0)
            lin += Scalar(f.shift) * ctx_->c();
        if (lin.is_zero()) {
            if (f.power < 0)
                throw PoleError("uncancelled vanishing factor (" + f.x.str() + ") - (" + f.y.str() +
                                ") + " + std::to_string(f.shift) + "c in a denominator");
            zero = true;
            continue;
        }
        value *= pow(lin, f.power);
    }
    return zero ? ctx_->lift(Scalar(0)) : value;
}

// ---------------------------------------------------------------------------
// partitions

std::uint64_t multinomial(std::size_t total, std::span<const std::size_t> sizes) {
    std::uint64_t out = 1;
    std::size_t left = total;
    for (auto s : sizes) {
        // binomial(left, s)
        std::uint64_t b = 1;
        for (std::size_t k = 1; k <= s; ++k)
            b = b * (left - s + k) / k;
        out *= b;
        left -= s;
    }
    return out;
}

namespace {

void partition_rec(const VarSet& src, std::span<const std::size_t> sizes, std::size_t block,
                   std::uint64_t remaining, std::vector<VarSet>& blocks,
                   const std::function<void(std::span<const VarSet>)>& visit) {
    if (block == sizes.size()) {
        visit(blocks);
        return;
    }
    std::vector<std::size_t> avail;
    for (std::size_t k = 0; k < src.size(); ++k)
        if (remaining & (std::uint64_t{1} << k))
            avail.push_back(k);
    const std::size_t want = sizes[block];
    if (block + 1 == sizes.size()) {
        blocks[block] = src.subset(remaining);
        visit(blocks);
        return;
    }
    // lexicographic combinations of `want` positions among `avail`
    std::vector<std::size_t> pick(want);
    std::iota(pick.begin(), pick.end(), std::size_t{0});
    while (true) {
        std::uint64_t mask = 0;
        for (auto p : pick)
            mask |= std::uint64_t{1} << avail[p];
        blocks[block] = src.subset(mask);
        partition_rec(src, sizes, block + 1, remaining & ~mask, blocks, visit);
        // next combination
        std::size_t k = want;
        while (k > 0 && pick[k - 1] == avail.size() - want + k - 1)
            --k;
        if (k == 0)
            break;
        ++pick[k - 1];
        for (std::size_t m = k; m < want; ++m)
            pick[m] = pick[m - 1] + 1;
    }
}

} // namespace

void for_each_partition(const VarSet& src, std::span<const std::size_t> sizes,
                        const std::function<void(std::span<const VarSet>)>& visit) {
    const std::size_t total = std::accumulate(sizes.begin(), sizes.end(), std::size_t{0});
    if (total != src.size())
        throw SizeMismatch("partition sizes sum to " + std::to_string(total) + ", set has " +
                           std::to_string(src.size()) + " elements");
    if (src.size() > 63)
        throw SizeMismatch("partition source too large");
    if (sizes.empty()) {
        visit({});
        return;
    }
    std::vector<VarSet> blocks(sizes.size());
    const std::uint64_t all = (std::uint64_t{1} << src.size()) - 1;
    partition_rec(src, sizes, 0, all, blocks, visit);
}

std::vector<std::vector<VarSet>> partitions(const VarSet& src, std::span<const std::size_t> sizes) {
    std::vector<std::vector<VarSet>> out;
    for_each_partition(src, sizes, [&](std::span<const VarSet> blocks) {
        out.emplace_back(blocks.begin(), blocks.end());
    });
    return out;
}

std::vector<std::vector<VarSet>> partitions(const VarSet& src, std::initializer_list<std::size_t> sizes) {
    return partitions(src, std::span<const std::size_t>(sizes.begin(), sizes.size()));
}

// ---------------------------------------------------------------------------
// sampling

VarSet sample_generic(std::size_t count, const EvalContext& ctx, std::uint64_t seed,
                      const VarSet& forbidden) {
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<long> den_dist(1, 6);
    std::uniform_int_distribution<long> num_dist(-24, 24);
    const Scalar c = ctx.c();
    auto clashes = [&](const Scalar& x, const Scalar& y) {
        const Scalar d = x - y;
        return d.is_zero() || (d - c).is_zero() || (d + c).is_zero();
    };

    std::vector<Scalar> out;
    std::size_t attempts = 0;
    const std::size_t budget = 1000 + 200 * count;
    while (out.size() < count) {
        if (++attempts > budget)
            throw ExhaustionError("sample_generic: could not draw " + std::to_string(count) +
                                  " generic values");
        const long den = den_dist(rng);
        const Scalar x = ctx.lift(Scalar::fraction(num_dist(rng) * den + num_dist(rng) % den, den));
        bool ok = true;
        for (const auto& y : out)
            ok = ok && !clashes(x, y);
        for (const auto& y : forbidden)
            ok = ok && !clashes(x, y);
        if (ok)
            out.push_back(x);
    }
    return VarSet(std::move(out));
}

} // namespace superbethe
