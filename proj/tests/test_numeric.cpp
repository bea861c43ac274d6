#include "selfsim/errors.hpp"
#include "selfsim/numeric.hpp"
#include "support.hpp"

#include <random>
#include <unordered_set>

using namespace selfsim;
using selfsim::test::pt;
using selfsim::test::q;

namespace {

// Sum of eps / p^t for t = n+2 .. n+1+terms, plus a bound on what is left.
std::pair<Rational, Rational> partial_tail(const Rational& eps, long p, long n, long terms) {
    Rational sum;
    Rational w = pow(Rational(p), -(n + 1));
    for (long t = 0; t < terms; ++t) {
        w /= Rational(p);
        sum += eps * w;
    }
    return {sum, eps.abs() * w / Rational(p - 1)};
}

}  // namespace

TEST_CASE("rationals are stored in lowest terms") {
    CHECK(Rational(6, 4).str() == "3/2");
    CHECK(Rational(-6, -4) == q("3/2"));
    CHECK(Rational(3, -6).str() == "-1/2");
    CHECK(Rational(5).str() == "5/1");
    CHECK(Rational(0, 7).den() == 1);
    CHECK_THROWS_AS(Rational(1, 0), DomainError);
    CHECK_THROWS_AS(Rational(1) / Rational(0), DomainError);
}

TEST_CASE("parse accepts fractions, integers and exact decimals") {
    CHECK(q("2/7") == Rational(2, 7));
    CHECK(q("-12") == Rational(-12));
    CHECK(q("+3/9") == Rational(1, 3));
    CHECK(q("1.25") == Rational(5, 4));
    CHECK(q("-0.5") == Rational(-1, 2));
    CHECK(q(".5") == Rational(1, 2));
    CHECK(q(" 7 ") == Rational(7));
    CHECK(q("1.4142135623730951") == Rational(BigInt("14142135623730951"), BigInt("10000000000000000")));
    for (const char* bad : {"", "abc", "1/0", "/3", "3/", "1.2.3", "1e5", "--1", "1/-2", "sqrt2"}) {
        CHECK_THROWS_AS(Rational::parse(bad), ParseError);
    }
}

TEST_CASE("floor, ceil and rounding") {
    CHECK(q("7/2").floor() == 3);
    CHECK(q("-7/2").floor() == -4);
    CHECK(q("-7/2").ceil() == -3);
    CHECK(round_half_up(q("1/2")) == 1);
    CHECK(round_half_up(q("-1/2")) == 0);
    CHECK(round_half_up(q("-3/5")) == -1);
}

TEST_CASE("pow and ipow") {
    CHECK(pow(Rational(3), 4) == Rational(81));
    CHECK(pow(Rational(-3), 3) == Rational(-27));
    CHECK(pow(Rational(2), -3) == Rational(1, 8));
    CHECK(ipow(-3, 2) == 9);
    CHECK(ipow(3, 40) == BigInt("12157665459056928801"));
}

TEST_CASE("field axioms hold exactly on random rationals") {
    std::mt19937_64 rng(7);
    std::uniform_int_distribution<long> num(-1000, 1000);
    std::uniform_int_distribution<long> den(1, 97);
    const auto draw = [&] { return Rational(num(rng), den(rng)); };
    for (int i = 0; i < 500; ++i) {
        const Rational a = draw();
        const Rational b = draw();
        const Rational c = draw();
        CHECK((a + b) + c == a + (b + c));
        CHECK((a * b) * c == a * (b * c));
        CHECK(a * (b + c) == a * b + a * c);
        CHECK(a + b == b + a);
        CHECK(a - a == Rational(0));
        if (!b.is_zero()) CHECK((a / b) * b == a);
    }
}

TEST_CASE("equal rationals hash equally") {
    std::unordered_set<Rational> set{q("1/2"), q("2/4"), q("3/6"), q("1/3")};
    CHECK(set.size() == 2);
    CHECK(Point2Hash{}(pt("1/2", "1")) == Point2Hash{}(Point2{Rational(2, 4), Rational(3, 3)}));
}

TEST_CASE("geo_tail matches the series it sums") {
    CHECK(geo_tail(Rational(2), 3, 0) == Rational(1, 3));
    CHECK(geo_tail(Rational(0), 3, 5) == Rational(0));
    CHECK(geo_tail(Rational(9), 3, 1) == Rational(1, 2));
    for (const auto& [eps, p, n] : {std::tuple{Rational(2), 3L, 0L}, std::tuple{Rational(9), 3L, 1L},
                                    std::tuple{q("-7/5"), 5L, 2L}}) {
        const auto [sum, rest] = partial_tail(eps, p, n, 40);
        CHECK((geo_tail(eps, p, n) - sum).abs() <= rest);
    }
    CHECK_THROWS_AS(geo_tail(Rational(1), 1, 0), InvalidParameter);
    CHECK_THROWS_AS(geo_tail(Rational(1), 3, -1), InvalidParameter);
}

TEST_CASE("geo_tail times p^(n+1)(p-1) returns eps") {
    std::mt19937_64 rng(11);
    std::uniform_int_distribution<long> num(-500, 500);
    std::uniform_int_distribution<long> den(1, 50);
    for (int i = 0; i < 200; ++i) {
        const Rational eps(num(rng), den(rng));
        const long p = 2 + i % 6;
        const long n = i % 5;
        CHECK(geo_tail(eps, p, n) * pow(Rational(p), n + 1) * Rational(p - 1) == eps);
    }
}

TEST_CASE("classify_overlap") {
    const Overlap touch = classify_overlap(Interval(q("0"), q("1")), Interval(q("1"), q("2")));
    CHECK(touch.kind == OverlapKind::Point);
    CHECK(touch.point == Rational(1));
    const Overlap seg = classify_overlap(Interval(q("0"), q("1")), Interval(q("1/2"), q("3/2")));
    CHECK(seg.kind == OverlapKind::Segment);
    CHECK(seg.segment == Interval(q("1/2"), q("1")));
    CHECK(classify_overlap(Interval(q("0"), q("1")), Interval(q("3/2"), q("2"))).kind == OverlapKind::Empty);
    CHECK_THROWS_AS(Interval(q("1"), q("0")), InvalidParameter);
}

TEST_CASE("classify_overlap is symmetric") {
    std::mt19937_64 rng(3);
    std::uniform_int_distribution<long> num(-20, 20);
    for (int i = 0; i < 400; ++i) {
        Rational a(num(rng), 4);
        Rational b(num(rng), 4);
        Rational c(num(rng), 4);
        Rational d(num(rng), 4);
        if (b < a) std::swap(a, b);
        if (d < c) std::swap(c, d);
        const Overlap x = classify_overlap(Interval(a, b), Interval(c, d));
        const Overlap y = classify_overlap(Interval(c, d), Interval(a, b));
        REQUIRE(x.kind == y.kind);
        if (x.kind == OverlapKind::Point) CHECK(x.point == y.point);
        if (x.kind == OverlapKind::Segment) CHECK(x.segment == y.segment);
    }
}

TEST_CASE("segment membership is exact") {
    const Segment s{pt("0", "0"), pt("1", "1")};
    CHECK(s.contains(pt("1/3", "1/3")));
    CHECK(s.contains(pt("1", "1")));
    CHECK_FALSE(s.contains(pt("1/3", "1/3") + pt("0", "1/1000000000000")));
    CHECK_FALSE(s.contains(pt("2", "2")));
    const Segment dot{pt("1/2", "1/2"), pt("1/2", "1/2")};
    CHECK(dot.is_degenerate());
    CHECK(dot.contains(pt("1/2", "1/2")));
    CHECK_FALSE(dot.contains(pt("1/2", "1")));
}
