#include "superbethe/weights.hpp"

#include <map>
#include <memory>
#include <mutex>

#include "superbethe/chain.hpp"

namespace superbethe {

Scalar WeightProvider::lambda(int i, const Scalar& x) const {
    switch (i) {
    case 1:
        return lambda1(x);
    case 2:
        return lambda2(x);
    case 3:
        return lambda3(x);
    }
    throw SizeMismatch("lambda index must be 1, 2 or 3");
}

namespace {

Scalar nonzero_lambda2(const WeightProvider& w, const Scalar& x) {
    Scalar l2 = w.lambda2(x);
    if (l2.is_zero())
        throw ZeroWeight("lambda_2(" + x.str() + ") = 0");
    return l2;
}

} // namespace

Scalar WeightProvider::lambda2_of(const VarSet& xs) const {
    Scalar out(1);
    for (const auto& x : xs)
        out *= nonzero_lambda2(*this, x);
    return out;
}

Scalar WeightProvider::r1(const Scalar& x) const { return lambda1(x) / nonzero_lambda2(*this, x); }
Scalar WeightProvider::r3(const Scalar& x) const { return lambda3(x) / nonzero_lambda2(*this, x); }

Scalar WeightProvider::r1_of(const VarSet& xs) const {
    Scalar out(1);
    for (const auto& x : xs)
        out *= r1(x);
    return out;
}

Scalar WeightProvider::r3_of(const VarSet& xs) const {
    Scalar out(1);
    for (const auto& x : xs)
        out *= r3(x);
    return out;
}

WeightProvider chain_weights(const ChainRep& chain) {
    struct Cache {
        std::mutex mu;
        std::map<std::string, Scalar> values[3];
    };
    auto cache = std::make_shared<Cache>();
    auto chain_copy = std::make_shared<ChainRep>(chain);
    auto make = [cache, chain_copy](int i) {
        return [cache, chain_copy, i](const Scalar& x) {
            const std::string key = x.str();
            {
                std::lock_guard lock(cache->mu);
                auto it = cache->values[i - 1].find(key);
                if (it != cache->values[i - 1].end())
                    return it->second;
            }
            Scalar v = lambda_eval(*chain_copy, i, x);
            std::lock_guard lock(cache->mu);
            cache->values[i - 1].emplace(key, v);
            return v;
        };
    };
    return WeightProvider{make(1), make(2), make(3)};
}

} // namespace superbethe
