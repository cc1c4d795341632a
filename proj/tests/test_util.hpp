#pragma once

#include <string>

#include "doctest.h"
#include "hxz/bignum.hpp"

namespace doctest {
template <>
struct StringMaker<hxz::BigReal> {
    static String convert(const hxz::BigReal& v) { return v.to_string(12).c_str(); }
};
template <>
struct StringMaker<hxz::BigComplex> {
    static String convert(const hxz::BigComplex& v) {
        return ("(" + v.re.to_string(12) + ", " + v.im.to_string(12) + ")").c_str();
    }
};
}  // namespace doctest
