#pragma once

#include "selfsim/numeric.hpp"

#include <doctest.h>

#include <ostream>

namespace selfsim::test {

inline Rational q(const char* text) { return Rational::parse(text); }
inline Point2 pt(const char* x, const char* y) { return Point2{q(x), q(y)}; }

}  // namespace selfsim::test

namespace doctest {
template <>
struct StringMaker<selfsim::Rational> {
    static String convert(const selfsim::Rational& r) { return r.str().c_str(); }
};
template <>
struct StringMaker<selfsim::Point2> {
    static String convert(const selfsim::Point2& p) { return ("(" + p.x.str() + ", " + p.y.str() + ")").c_str(); }
};
}  // namespace doctest
