#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <string>

namespace hm {

/// Arbitrary-precision natural numbers (values are kept non-negative by every producer).
using Nat = boost::multiprecision::cpp_int;
/// Exact rationals used by relation definitions in structure specs.
using Rational = boost::multiprecision::cpp_rational;

inline std::string toString(const Nat& n) { return n.str(); }

inline std::string toString(const Rational& q) {
    if (boost::multiprecision::denominator(q) == 1) return boost::multiprecision::numerator(q).str();
    return boost::multiprecision::numerator(q).str() + "/" + boost::multiprecision::denominator(q).str();
}

// Narrowing used for sequence indices; callers bound the value first.
inline std::uint64_t toIndex(const Nat& n) { return n.convert_to<std::uint64_t>(); }

}  // namespace hm
