#pragma once

#include <string>

#include "superbethe/bethe.hpp"

namespace superbethe {

/// T_ij applied n times at the points z_1..z_n.
struct OperatorId {
    int i = 1;
    int j = 1;
    std::size_t n = 1;

    bool odd() const { return entry_parity(i, j) == 1; }
    /// "T21" style name.
    std::string name() const;
};

/// The nine entries in the order upper (T13, T12, T23), diagonal, lower (T21, T32, T31).
const std::array<std::pair<int, int>, 9>& all_entries();

struct ActionInput {
    OperatorId op;
    VarSet z;
    BetheLabel label;
    WeightProvider weights;
    EvalContext ctx;
};

/// T13, T12, T23.
LinearCombo act_upper(const ActionInput& in);
/// T11, T22, T33.
LinearCombo act_diag(const ActionInput& in);
/// T21, T32, T31. Empty when the target cardinalities are negative.
LinearCombo act_lower(const ActionInput& in);
/// Dispatches on the entry.
LinearCombo act(const ActionInput& in);

/// Operator side: the plain product T_ij(z_1)..T_ij(z_n) B for even entries,
/// the normalized symmetric product for odd ones.
StateVector action_lhs(const ChainRep& chain, const ActionInput& in, BetheFactory& factory);

struct ActionCheck {
    Scalar residual;
    /// Whether the operator side is a nonzero vector.
    bool lhs_nonzero = false;
    std::size_t terms = 0;
};

/// |action_lhs - expand(act(in))| over the chain basis.
ActionCheck verify_action(const ChainRep& chain, const ActionInput& in, BetheFactory& factory);
Scalar verify_action(const ChainRep& chain, const ActionInput& in);

} // namespace superbethe
