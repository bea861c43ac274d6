#include "selfsim/numeric.hpp"

#include "selfsim/errors.hpp"

#include <algorithm>
#include <cctype>
#include <ostream>

namespace selfsim {

namespace {

std::size_t hash_mpz(const mpz_class& z) {
    std::size_t h = static_cast<std::size_t>(sgn(z)) + 0x9e3779b97f4a7c15ULL;
    const std::size_t limbs = mpz_size(z.get_mpz_t());
    for (std::size_t i = 0; i < limbs; ++i) {
        const auto limb = static_cast<std::size_t>(mpz_getlimbn(z.get_mpz_t(), static_cast<mp_size_t>(i)));
        h ^= limb + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
    }
    return h;
}

bool all_digits(std::string_view s) {
    return !s.empty() && std::all_of(s.begin(), s.end(), [](unsigned char c) { return std::isdigit(c) != 0; });
}

BigInt parse_integer(std::string_view s, std::string_view whole) {
    std::string_view body = s;
    if (!body.empty() && (body.front() == '+' || body.front() == '-')) body.remove_prefix(1);
    if (!all_digits(body)) throw ParseError("not a rational number: '" + std::string(whole) + "'");
    return BigInt(std::string(s.front() == '+' ? s.substr(1) : s));
}

}  // namespace

static_assert(sizeof(long) == sizeof(long long), "LP64 data model expected");

Rational::Rational(long long v) : q_(static_cast<long>(v)) {}

Rational::Rational(mpq_class q) : q_(std::move(q)) {
    q_.canonicalize();
}

Rational::Rational(const BigInt& num, const BigInt& den) {
    if (den == 0) throw DomainError("rational with zero denominator");
    q_ = mpq_class(num, den);
    q_.canonicalize();
}

Rational::Rational(long num, long den) : Rational(BigInt(num), BigInt(den)) {}

Rational Rational::parse(std::string_view text) {
    std::string_view s = text;
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    if (s.empty()) throw ParseError("empty rational literal");

    if (const auto slash = s.find('/'); slash != std::string_view::npos) {
        const BigInt num = parse_integer(s.substr(0, slash), text);
        const std::string_view den_text = s.substr(slash + 1);
        if (!all_digits(den_text)) throw ParseError("bad denominator in '" + std::string(text) + "'");
        const BigInt den(std::string{den_text});
        if (den == 0) throw ParseError("zero denominator in '" + std::string(text) + "'");
        return Rational(num, den);
    }

    if (const auto dot = s.find('.'); dot != std::string_view::npos) {
        bool negative = false;
        std::string_view body = s;
        if (body.front() == '+' || body.front() == '-') {
            negative = body.front() == '-';
            body.remove_prefix(1);
        }
        const auto d = body.find('.');
        const std::string_view int_part = body.substr(0, d);
        const std::string_view frac_part = body.substr(d + 1);
        if ((int_part.empty() && frac_part.empty()) || (!int_part.empty() && !all_digits(int_part)) ||
            (!frac_part.empty() && !all_digits(frac_part))) {
            throw ParseError("not a decimal literal: '" + std::string(text) + "'");
        }
        const std::string digits = std::string(int_part) + std::string(frac_part);
        BigInt num(digits.empty() ? std::string("0") : digits);
        if (negative) num = -num;
        return Rational(num, BigInt(ipow(10, frac_part.size())));
    }

    return Rational(parse_integer(s, text));
}

Rational& Rational::operator/=(const Rational& o) {
    if (o.is_zero()) throw DomainError("division by zero");
    q_ /= o.q_;
    return *this;
}

Rational Rational::operator-() const {
    return Rational(mpq_class(-q_));
}

Rational Rational::abs() const {
    return Rational(mpq_class(::abs(q_)));
}

BigInt Rational::floor() const {
    BigInt r;
    mpz_fdiv_q(r.get_mpz_t(), q_.get_num_mpz_t(), q_.get_den_mpz_t());
    return r;
}

BigInt Rational::ceil() const {
    BigInt r;
    mpz_cdiv_q(r.get_mpz_t(), q_.get_num_mpz_t(), q_.get_den_mpz_t());
    return r;
}

std::string Rational::str() const {
    return q_.get_num().get_str() + "/" + q_.get_den().get_str();
}

std::size_t Rational::hash() const {
    const std::size_t a = hash_mpz(q_.get_num());
    const std::size_t b = hash_mpz(q_.get_den());
    return a ^ (b + 0x9e3779b97f4a7c15ULL + (a << 6) + (a >> 2));
}

std::ostream& operator<<(std::ostream& os, const Rational& r) {
    return os << r.str();
}

Rational pow(const Rational& base, long exp) {
    if (exp < 0) return Rational(1) / pow(base, -exp);
    BigInt n;
    BigInt d;
    mpz_pow_ui(n.get_mpz_t(), base.raw().get_num_mpz_t(), static_cast<unsigned long>(exp));
    mpz_pow_ui(d.get_mpz_t(), base.raw().get_den_mpz_t(), static_cast<unsigned long>(exp));
    return Rational(n, d);
}

BigInt ipow(long base, unsigned long exp) {
    BigInt r;
    mpz_pow_ui(r.get_mpz_t(), BigInt(base).get_mpz_t(), exp);
    return r;
}

BigInt round_half_up(const Rational& r) {
    return (r + Rational(1, 2)).floor();
}

Interval::Interval(Rational lo, Rational hi) : lo_(std::move(lo)), hi_(std::move(hi)) {
    if (hi_ < lo_) throw InvalidParameter("interval with lo > hi: [" + lo_.str() + ", " + hi_.str() + "]");
}

std::ostream& operator<<(std::ostream& os, const Point2& p) {
    return os << '(' << p.x << ", " << p.y << ')';
}

std::size_t Point2Hash::operator()(const Point2& p) const noexcept {
    const std::size_t a = p.x.hash();
    return a ^ (p.y.hash() + 0x9e3779b97f4a7c15ULL + (a << 6) + (a >> 2));
}

bool Segment::contains(const Point2& q) const {
    const Point2 ab = b - a;
    const Point2 aq = q - a;
    if (ab.x * aq.y - ab.y * aq.x != Rational(0)) return false;
    const auto within = [](const Rational& v, const Rational& e1, const Rational& e2) {
        return (e1 <= v && v <= e2) || (e2 <= v && v <= e1);
    };
    return within(q.x, a.x, b.x) && within(q.y, a.y, b.y);
}

Rational geo_tail(const Rational& eps, long p, long n) {
    if (p < 2) throw InvalidParameter("geo_tail needs p >= 2, got " + std::to_string(p));
    if (n < 0) throw InvalidParameter("geo_tail needs n >= 0, got " + std::to_string(n));
    return eps / (Rational(ipow(p, static_cast<unsigned long>(n + 1))) * Rational(p - 1));
}

const char* to_string(OverlapKind k) {
    switch (k) {
        case OverlapKind::Empty: return "Empty";
        case OverlapKind::Point: return "Point";
        case OverlapKind::Segment: return "Segment";
    }
    return "?";
}

Overlap classify_overlap(const Interval& a, const Interval& b) {
    const Rational& lo = std::max(a.lo(), b.lo());
    const Rational& hi = std::min(a.hi(), b.hi());
    Overlap out;
    if (hi < lo) {
        out.kind = OverlapKind::Empty;
    } else if (hi == lo) {
        out.kind = OverlapKind::Point;
        out.point = lo;
    } else {
        out.kind = OverlapKind::Segment;
        out.segment = Interval(lo, hi);
    }
    return out;
}

}  // namespace selfsim
