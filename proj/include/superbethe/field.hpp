#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <initializer_list>
#include <span>
#include <string>
#include <vector>

#include "superbethe/errors.hpp"
#include "superbethe/scalar.hpp"

namespace superbethe {

/// Global evaluation data: the deformation constant c and the arithmetic mode.
class EvalContext {
public:
    EvalContext() = default;
    explicit EvalContext(Scalar c, Mode mode = Mode::exact);

    const Scalar& c() const noexcept { return c_; }
    Mode mode() const noexcept { return mode_; }
    /// Converts a value into this context's arithmetic mode.
    Scalar lift(const Scalar& x) const { return x.to_mode(mode_); }

private:
    Scalar c_{1};
    Mode mode_ = Mode::exact;
};

/// Ordered set of spectral parameters. Each element keeps the index it had in
/// the set it was extracted from, so subsets stay in increasing-subscript order.
class VarSet {
public:
    VarSet() = default;
    VarSet(std::initializer_list<Scalar> xs);
    explicit VarSet(std::vector<Scalar> xs);
    VarSet(std::vector<Scalar> xs, std::vector<std::size_t> ids);

    std::size_t size() const noexcept { return elems_.size(); }
    bool empty() const noexcept { return elems_.empty(); }
    const Scalar& operator[](std::size_t k) const { return elems_[k]; }
    std::size_t id(std::size_t k) const { return ids_[k]; }
    std::span<const Scalar> elems() const noexcept { return elems_; }
    std::span<const std::size_t> ids() const noexcept { return ids_; }
    auto begin() const noexcept { return elems_.begin(); }
    auto end() const noexcept { return elems_.end(); }

    /// Elements whose positions are set in `mask`, in increasing order.
    VarSet subset(std::uint64_t mask) const;
    VarSet without(std::size_t k) const;
    VarSet shifted(const Scalar& by) const;
    /// {*this, other}; ids of `other` are offset past this set's ids.
    VarSet joined(const VarSet& other) const;
    VarSet with_mode(Mode m) const;

    bool contains(const Scalar& x) const;
    /// Multiset equality of values (order-insensitive).
    bool same_values(const VarSet& other) const;
    /// Values sorted by value_less.
    std::vector<Scalar> sorted_values() const;

    std::string str() const;

private:
    std::vector<Scalar> elems_;
    std::vector<std::size_t> ids_;
};

enum class AuxKind { g, f, h, t };

char aux_name(AuxKind kind);

/// g = c/(x-y), f = 1+g, h = f/g = (x-y+c)/c, t = g/h.
Scalar aux_eval(AuxKind kind, const Scalar& x, const Scalar& y, const EvalContext& ctx);

/// Double product of aux_eval over the Cartesian pairing A x B; empty sets give 1.
Scalar prod_eval(AuxKind kind, const VarSet& a, const VarSet& b, const EvalContext& ctx);
Scalar prod_eval(AuxKind kind, const Scalar& x, const VarSet& b, const EvalContext& ctx);
Scalar prod_eval(AuxKind kind, const VarSet& a, const Scalar& y, const EvalContext& ctx);

/// A product c^k * s * prod (x - y + m c)^e of linear forms, kept unevaluated so
/// that coinciding parameters cancel structurally before evaluation. A factor
/// that is identically the same form in numerator and denominator cancels; an
/// uncancelled vanishing numerator gives 0 and an uncancelled vanishing
/// denominator raises PoleError.
class FactorProduct {
public:
    explicit FactorProduct(const EvalContext& ctx);

    FactorProduct& scale(const Scalar& s);
    FactorProduct& mul(AuxKind kind, const Scalar& x, const Scalar& y, int power = 1);
    FactorProduct& mul(AuxKind kind, const VarSet& a, const VarSet& b, int power = 1);
    FactorProduct& div(AuxKind kind, const Scalar& x, const Scalar& y) { return mul(kind, x, y, -1); }
    FactorProduct& div(AuxKind kind, const VarSet& a, const VarSet& b) { return mul(kind, a, b, -1); }

    Scalar evaluate() const;

private:
    struct Linear {
        Scalar x, y;
        int shift; // multiples of c
        int power;
    };
    void add_linear(const Scalar& x, const Scalar& y, int shift, int power);

    const EvalContext* ctx_;
    Scalar constant_{1};
    int c_power_ = 0;
    std::vector<Linear> factors_;
};

/// Enumerates every split of `src` into labeled blocks of the given sizes, in
/// deterministic lexicographic order. Within a block, elements keep increasing
/// original positions.
void for_each_partition(const VarSet& src, std::span<const std::size_t> sizes,
                        const std::function<void(std::span<const VarSet>)>& visit);
std::vector<std::vector<VarSet>> partitions(const VarSet& src, std::span<const std::size_t> sizes);
std::vector<std::vector<VarSet>> partitions(const VarSet& src, std::initializer_list<std::size_t> sizes);

std::uint64_t multinomial(std::size_t total, std::span<const std::size_t> sizes);

/// `count` distinct exact rationals such that no two values drawn from the
/// result together with `forbidden` differ by 0 or +-c. Deterministic in seed.
VarSet sample_generic(std::size_t count, const EvalContext& ctx, std::uint64_t seed,
                      const VarSet& forbidden = {});

} // namespace superbethe
