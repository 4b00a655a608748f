#pragma once

#include <string>

#include "doctest.h"
#include "superbethe/field.hpp"

namespace sbtest {

using superbethe::Scalar;

inline Scalar q(long num, long den = 1) { return Scalar::fraction(num, den); }

inline bool exactly_zero(const Scalar& s) { return s.is_exact() && s.is_zero(); }

} // namespace sbtest

namespace doctest {
template <>
struct StringMaker<superbethe::Scalar> {
    static String convert(const superbethe::Scalar& s) { return s.str().c_str(); }
};
} // namespace doctest
