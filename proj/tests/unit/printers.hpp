#pragma once

// doctest renderings for library types that appear in assertions.

#include "doctest.h"
#include "hm/herbrand.hpp"

namespace hmtest {

inline std::string cls(hm::FormulaClass c) { return hm::toString(c); }
inline std::string cls(const hm::Formula& f) { return hm::toString(hm::classify(f)); }

}  // namespace hmtest

namespace doctest {

template <>
struct StringMaker<hm::Formula> {
    static String convert(const hm::Formula& f) { return hm::show(f).c_str(); }
};

template <>
struct StringMaker<hm::Term> {
    static String convert(const hm::Term& t) { return hm::show(t).c_str(); }
};

template <>
struct StringMaker<hm::Nat> {
    static String convert(const hm::Nat& n) { return n.str().c_str(); }
};

}  // namespace doctest
