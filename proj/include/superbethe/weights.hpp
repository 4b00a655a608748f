#pragma once

#include <functional>

#include "superbethe/field.hpp"

namespace superbethe {

class ChainRep;

/// Vacuum eigenvalues lambda_1..lambda_3 as functions of the spectral parameter.
struct WeightProvider {
    std::function<Scalar(const Scalar&)> lambda1, lambda2, lambda3;

    Scalar lambda(int i, const Scalar& x) const;
    /// Product of lambda_2 over a set; throws ZeroWeight if any factor vanishes.
    Scalar lambda2_of(const VarSet& xs) const;
    Scalar r1(const Scalar& x) const;
    Scalar r3(const Scalar& x) const;
    Scalar r1_of(const VarSet& xs) const;
    Scalar r3_of(const VarSet& xs) const;
};

/// Weights read off the chain's vacuum, memoized per point.
WeightProvider chain_weights(const ChainRep& chain);

} // namespace superbethe
