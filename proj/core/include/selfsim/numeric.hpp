#pragma once

/**
 * @file numeric.hpp
 * @brief Exact scalars and planar primitives.
 *
 * Rational is an arbitrary-precision fraction kept in lowest terms with a
 * positive denominator, so equality is structural and values can be hashed.
 * Every topology predicate in the library is evaluated with these types;
 * binary floating point only appears in rendering and the float
 * demonstration mode of the quasi-periodicity check.
 */

#include <gmpxx.h>

#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <string>
#include <string_view>

namespace selfsim {

using BigInt = mpz_class;

class Rational {
public:
    Rational() : q_(0) {}
    Rational(int v) : q_(v) {}            // NOLINT(google-explicit-constructor)
    Rational(long v) : q_(v) {}           // NOLINT(google-explicit-constructor)
    Rational(long long v);                // NOLINT(google-explicit-constructor)
    Rational(const BigInt& v) : q_(v) {}  // NOLINT(google-explicit-constructor)
    Rational(const BigInt& num, const BigInt& den);
    Rational(long num, long den);

    /// Parses "a/b", integers and decimal literals such as "-1.25" exactly.
    static Rational parse(std::string_view text);

    BigInt num() const { return q_.get_num(); }
    BigInt den() const { return q_.get_den(); }

    int sign() const { return sgn(q_); }
    bool is_zero() const { return sign() == 0; }
    bool is_integer() const { return q_.get_den() == 1; }

    Rational abs() const;
    BigInt floor() const;
    BigInt ceil() const;
    double to_double() const { return q_.get_d(); }

    /// Always "a/b", including integers ("3/1").
    std::string str() const;

    std::size_t hash() const;

    Rational& operator+=(const Rational& o) { q_ += o.q_; return *this; }
    Rational& operator-=(const Rational& o) { q_ -= o.q_; return *this; }
    Rational& operator*=(const Rational& o) { q_ *= o.q_; return *this; }
    Rational& operator/=(const Rational& o);

    friend Rational operator+(Rational a, const Rational& b) { return a += b; }
    friend Rational operator-(Rational a, const Rational& b) { return a -= b; }
    friend Rational operator*(Rational a, const Rational& b) { return a *= b; }
    friend Rational operator/(Rational a, const Rational& b) { return a /= b; }
    Rational operator-() const;

    friend bool operator==(const Rational& a, const Rational& b) { return cmp(a.q_, b.q_) == 0; }
    friend std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
        const int c = cmp(a.q_, b.q_);
        return c < 0 ? std::strong_ordering::less
                     : (c > 0 ? std::strong_ordering::greater : std::strong_ordering::equal);
    }

    const mpq_class& raw() const { return q_; }

private:
    explicit Rational(mpq_class q);
    mpq_class q_;
};

std::ostream& operator<<(std::ostream& os, const Rational& r);

/// base^exp for exp >= 0 (exp < 0 allowed for nonzero base).
Rational pow(const Rational& base, long exp);
BigInt ipow(long base, unsigned long exp);
/// Integer nearest to r; ties are not resolved here, callers test for them.
BigInt round_half_up(const Rational& r);

/// Closed interval [lo, hi] with lo <= hi.
class Interval {
public:
    Interval(Rational lo, Rational hi);
    static Interval point(const Rational& x) { return {x, x}; }

    const Rational& lo() const { return lo_; }
    const Rational& hi() const { return hi_; }
    Rational width() const { return hi_ - lo_; }
    bool contains(const Rational& x) const { return lo_ <= x && x <= hi_; }
    Interval shifted(const Rational& d) const { return {lo_ + d, hi_ + d}; }

    friend bool operator==(const Interval&, const Interval&) = default;

private:
    Rational lo_;
    Rational hi_;
};

struct Point2 {
    Rational x;
    Rational y;

    Point2 operator+(const Point2& o) const { return {x + o.x, y + o.y}; }
    Point2 operator-(const Point2& o) const { return {x - o.x, y - o.y}; }
    Point2 operator*(const Rational& s) const { return {x * s, y * s}; }
    Point2 operator/(const Rational& s) const { return {x / s, y / s}; }
    Point2 swapped() const { return {y, x}; }

    friend bool operator==(const Point2&, const Point2&) = default;
    friend auto operator<=>(const Point2&, const Point2&) = default;
};

std::ostream& operator<<(std::ostream& os, const Point2& p);

struct Point2Hash {
    std::size_t operator()(const Point2& p) const noexcept;
};

/// Closed segment seg(a, b); a == b is a degenerate point segment.
struct Segment {
    Point2 a;
    Point2 b;

    bool is_degenerate() const { return a == b; }
    /// Exact membership: collinear with a, b and inside their bounding box.
    bool contains(const Point2& q) const;

    friend bool operator==(const Segment&, const Segment&) = default;
};

/// Sum of eps / p^t for t = n+2 .. infinity, i.e. eps / (p^(n+1) (p-1)).
Rational geo_tail(const Rational& eps, long p, long n);

enum class OverlapKind { Empty, Point, Segment };

const char* to_string(OverlapKind k);

struct Overlap {
    OverlapKind kind = OverlapKind::Empty;
    Rational point;                       // valid for Point
    Interval segment{Rational{}, Rational{}};  // valid for Segment
};

Overlap classify_overlap(const Interval& a, const Interval& b);

}  // namespace selfsim

template <>
struct std::hash<selfsim::Rational> {
    std::size_t operator()(const selfsim::Rational& r) const noexcept { return r.hash(); }
};
