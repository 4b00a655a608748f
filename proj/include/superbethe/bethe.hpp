#pragma once

#include <map>
#include <string>
#include <vector>

#include "superbethe/chain.hpp"
#include "superbethe/weights.hpp"

namespace superbethe {

/// Names B_{a,b}(u; v) with a = #u, b = #v.
struct BetheLabel {
    VarSet u;
    VarSet v;

    std::size_t a() const noexcept { return u.size(); }
    std::size_t b() const noexcept { return v.size(); }
    /// Order-insensitive key built from the sorted values of u and v.
    std::string key() const;
    std::string str() const;
    /// Labels naming the same vector (equal value multisets).
    bool same_as(const BetheLabel& other) const;
};

struct ComboTerm {
    Scalar coeff;
    BetheLabel label;
};

/// Finite sum of Bethe vectors. Terms with equal labels are merged, zero
/// coefficients dropped, and the rest ordered by label key.
class LinearCombo {
public:
    void add(const Scalar& coeff, const BetheLabel& label);
    void add(const LinearCombo& other, const Scalar& scale = Scalar(1));

    const std::vector<ComboTerm>& terms() const noexcept { return terms_; }
    std::size_t size() const noexcept { return terms_.size(); }
    bool empty() const noexcept { return terms_.empty(); }
    std::string str() const;

private:
    std::vector<ComboTerm> terms_;
};

enum class BetheRoute { sum_a, sum_b, recursive };

const char* route_name(BetheRoute route);

/// Sum over partitions with weight g(v_I,u_I) f(u_I,u_II) g(v_II,v_I) h(u_I,u_I)
/// / (lambda_2(u) lambda_2(v_II) f(v,u)) of TT_13(u_I) T_12(u_II) TT_23(v_II) Omega.
StateVector bethe_sum_A(const ChainRep& chain, const WeightProvider& w, const BetheLabel& label);

/// Sum over partitions with weight K(v_I|u_I) f(u_I,u_II) g(v_II,v_I)
/// / (lambda_2(u_II) lambda_2(v) f(v,u)) of TT_13(v_I) TT_23(v_II) T_12(u_II) Omega.
StateVector bethe_sum_B(const ChainRep& chain, const WeightProvider& w, const BetheLabel& label);

/// Bootstrap from Omega by solving the T_23 recursion for B_{0,b+1} and the
/// T_12 recursion for B_{a+1,b}.
StateVector bethe_recursive(const ChainRep& chain, const WeightProvider& w, const BetheLabel& label);

/// Any route. Parameters shared between u and v are first stripped off with
/// B({z,u'};{z,v'}) = T_13(z) B(u';v') / (lambda_2(z) h(v',z)).
StateVector bethe_vector(const ChainRep& chain, const WeightProvider& w, const BetheLabel& label,
                         BetheRoute route = BetheRoute::sum_a);

/// Memoizing builder for Bethe vectors on one chain.
class BetheFactory {
public:
    BetheFactory(const ChainRep& chain, WeightProvider weights, BetheRoute route = BetheRoute::sum_a);

    const StateVector& vector(const BetheLabel& label);
    /// sum of coeff * B(label) over the combo's terms
    StateVector expand(const LinearCombo& combo);

    const ChainRep& chain() const noexcept { return chain_; }
    const WeightProvider& weights() const noexcept { return weights_; }

private:
    const ChainRep& chain_;
    WeightProvider weights_;
    BetheRoute route_;
    std::map<std::string, StateVector> cache_;
};

StateVector expand_combo(const ChainRep& chain, const WeightProvider& w, const LinearCombo& combo);

} // namespace superbethe
