#include "selfsim/errors.hpp"
#include "selfsim/family_diag.hpp"
#include "selfsim/family_shift.hpp"
#include "selfsim/ifs.hpp"
#include "support.hpp"

#include <algorithm>
#include <mutex>
#include <random>
#include <set>

using namespace selfsim;
using selfsim::test::pt;
using selfsim::test::q;

namespace {

DigitSet shift_ds(long p, const char* eps) { return build_shift_digits(ShiftParams::make(p, q(eps))); }
DigitSet diag_ds(long p, const char* eps) { return build_diag_digits(DiagParams::make(p, q(eps))); }

Word word_of(const DigitSet& ds, std::initializer_list<std::pair<long, long>> labels) {
    Word w;
    for (const auto& [i, j] : labels) w.letters.push_back(ds.index_of(i, j));
    return w;
}

std::set<Point2> as_set(const std::vector<Point2>& v) { return {v.begin(), v.end()}; }

}  // namespace

TEST_CASE("eval_word on single and double letters") {
    const DigitSet a = shift_ds(3, "2");
    CHECK(eval_word(a, word_of(a, {{0, 0}})) == pt("0", "0"));
    CHECK(eval_word(a, word_of(a, {{1, 1}})) == pt("1", "1/3"));

    const DigitSet b = diag_ds(3, "3");
    const Word w = word_of(b, {{0, 0}, {2, 2}});
    CHECK(eval_word(b, w) == pt("14/9", "14/9"));
    // Same point by applying the two maps to the origin.
    CHECK(word_map(b, w).apply(pt("0", "0")) == pt("14/9", "14/9"));
    CHECK(compose(b.map(w.letters[0]), b.map(w.letters[1])).apply(pt("0", "0")) == pt("14/9", "14/9"));

    CHECK_THROWS_AS(eval_word(a, Word{{99}}), AddressError);
    CHECK(eval_word(a, Word{}) == pt("0", "0"));
    CHECK_THROWS_AS(word_map(a, Word{}), AddressError);
}

TEST_CASE("fixed points") {
    const DigitSet b = diag_ds(3, "3");
    CHECK(fixed_point(b.map(b.index_of(0, 0))) == pt("3/2", "3/2"));
    for (const char* e : {"0", "3", "-5/7"}) {
        const DigitSet d = diag_ds(3, e);
        CHECK(fixed_point(d.map(d.index_of(2, 0))) == pt("1", "0"));
    }
    const AffineMap zero = AffineMap::contraction(5, pt("0", "0"));
    CHECK(fixed_point(zero) == pt("0", "0"));

    std::mt19937_64 rng(5);
    std::uniform_int_distribution<long> num(-50, 50);
    for (int i = 0; i < 100; ++i) {
        const long p = (i % 2 == 0) ? 3 + i % 5 : -(3 + i % 5);
        const AffineMap f = AffineMap::contraction(p, Point2{Rational(num(rng), 7), Rational(num(rng), 3)});
        const Point2 t = fixed_point(f);
        CHECK(f.apply(t) == t);
        CHECK(compose(f, f).apply(t) == t);
    }
}

TEST_CASE("compose and map_equal") {
    const DigitSet b = diag_ds(3, "1/3");
    const auto f = [&](long i, long j) { return b.map(b.index_of(i, j)); };
    const AffineMap left = compose(f(0, 0), f(0, 2));
    const AffineMap right = compose(f(0, 1), f(1, 0));
    CHECK(map_equal(left, right));
    CHECK(left.scale_inv() == Rational(1, 9));
    CHECK(left.offset() == pt("1/9", "1/3"));

    const DigitSet b0 = diag_ds(3, "0");
    CHECK_FALSE(map_equal(b0.map(b0.index_of(0, 1)), b0.map(b0.index_of(1, 0))));

    CHECK_THROWS_AS(compose(AffineMap::contraction(3, pt("0", "0")), AffineMap::contraction(5, pt("0", "0"))),
                    InvalidParameter);
    CHECK_THROWS_AS(AffineMap::contraction(1, pt("0", "0")), InvalidParameter);
}

TEST_CASE("compose is associative and agrees with sequential application") {
    std::mt19937_64 rng(9);
    std::uniform_int_distribution<long> num(-9, 9);
    for (int i = 0; i < 100; ++i) {
        const long p = (i % 2 == 0) ? 3 : -4;
        const auto draw = [&] { return AffineMap::contraction(p, Point2{Rational(num(rng), 2), Rational(num(rng), 3)}); };
        const AffineMap a = draw();
        const AffineMap b = draw();
        const AffineMap c = draw();
        CHECK(compose(compose(a, b), c) == compose(a, compose(b, c)));
        const Point2 x{Rational(num(rng), 5), Rational(num(rng), 11)};
        CHECK(compose(a, b).apply(x) == a.apply(b.apply(x)));
    }
}

TEST_CASE("eval_word respects concatenation") {
    const DigitSet a = shift_ds(5, "3/7");
    std::mt19937_64 rng(13);
    std::uniform_int_distribution<std::size_t> letter(0, a.size() - 1);
    for (int i = 0; i < 100; ++i) {
        Word u;
        Word v;
        for (int k = 0; k < 1 + i % 4; ++k) u.letters.push_back(letter(rng));
        for (int k = 0; k < 1 + i % 3; ++k) v.letters.push_back(letter(rng));
        const Rational scale = pow(Rational(a.p), -static_cast<long>(u.size()));
        CHECK(eval_word(a, u + v) == eval_word(a, u) + eval_word(a, v) * scale);
    }
}

TEST_CASE("sample_attractor small cases") {
    const auto a = as_set(sample_attractor(shift_ds(3, "0"), 1));
    std::set<Point2> grid;
    for (long i = -1; i <= 1; ++i) {
        for (long j = -1; j <= 1; ++j) grid.insert(Point2{Rational(i, 3), Rational(j, 3)});
    }
    CHECK(a == grid);

    const auto b = as_set(sample_attractor(diag_ds(3, "0"), 1));
    std::set<Point2> grid_b;
    for (long i = 0; i <= 2; ++i) {
        for (long j = 0; j <= 2; ++j) grid_b.insert(Point2{Rational(i, 3), Rational(j, 3)});
    }
    CHECK(b == grid_b);

    const auto c = sample_attractor(shift_ds(3, "2"), 2);
    CHECK(c.size() == 81);
    CHECK(std::all_of(c.begin(), c.end(), [](const Point2& z) { return z.y.abs() <= Rational(4, 9); }));
    CHECK(std::any_of(c.begin(), c.end(), [](const Point2& z) { return z.y == Rational(4, 9); }));

    CHECK_THROWS_AS(sample_attractor(shift_ds(3, "1"), 6, 1000), ResourceError);
}

TEST_CASE("family A samples are symmetric about the x-axis") {
    for (const char* e : {"0", "2", "5/3", "-4"}) {
        const auto pts = as_set(sample_attractor(shift_ds(3, e), 3));
        for (const Point2& z : pts) CHECK(pts.count(Point2{z.x, -z.y}) == 1);
    }
}

TEST_CASE("family B samples are symmetric about y = x") {
    for (const char* e : {"0", "3", "9/2", "-1/3"}) {
        const auto pts = as_set(sample_attractor(diag_ds(4, e), 2));
        for (const Point2& z : pts) CHECK(pts.count(z.swapped()) == 1);
    }
}

TEST_CASE("lattice sampler reproduces the exact samples") {
    for (const auto& ds : {shift_ds(3, "2/5"), diag_ds(3, "4"), shift_ds(-3, "7/2")}) {
        const LatticeSampler lattice(ds, 3);
        std::mutex mu;
        std::set<Point2> got;
        lattice.for_each(
            [&](std::size_t, std::int64_t x, std::int64_t y) {
                std::lock_guard lock(mu);
                got.insert(Point2{Rational(BigInt(x), BigInt(lattice.denominator())),
                                  Rational(BigInt(y), BigInt(lattice.denominator()))});
            },
            3);
        CHECK(lattice.count() == ds.size() * ds.size() * ds.size());
        CHECK(got == as_set(sample_attractor(ds, 3)));
    }
}

TEST_CASE("attractor bounds enclose the samples and are attained in the limit") {
    for (const auto& ds : {shift_ds(3, "2"), shift_ds(-3, "2"), diag_ds(3, "5"), shift_ds(5, "-1/2")}) {
        const Box box = attractor_bounds(ds);
        const long depth = ds.size() > 9 ? 3 : 5;
        const auto pts = sample_attractor(ds, depth);
        Rational xmin = pts.front().x, xmax = pts.front().x;
        for (const Point2& z : pts) {
            CHECK(box.x.contains(z.x));
            CHECK(box.y.contains(z.y));
            xmin = std::min(xmin, z.x);
            xmax = std::max(xmax, z.x);
        }
        // Depth-k samples reach within |p|^-k * (box width) of each side.
        const Rational slack = box.x.width() * pow(Rational(ds.p < 0 ? -ds.p : ds.p), -depth);
        CHECK(xmin - box.x.lo() <= slack);
        CHECK(box.x.hi() - xmax <= slack);
    }
    // Family A, p = 3, eps = 2: x in [-1/2, 3/2], y in [-1/2, 1/2].
    const Box a = attractor_bounds(shift_ds(3, "2"));
    CHECK(a.x == Interval(q("-1/2"), q("3/2")));
    CHECK(a.y == Interval(q("-1/2"), q("1/2")));
}

TEST_CASE("squared digit set generates the same attractor") {
    for (const auto& ds : {shift_ds(-3, "2"), shift_ds(3, "1/2"), diag_ds(-3, "1")}) {
        const DigitSet sq = square_digits(ds);
        CHECK(sq.p == ds.p * ds.p);
        CHECK(sq.size() == ds.size() * ds.size());
        CHECK(as_set(sample_attractor(sq, 2)) == as_set(sample_attractor(ds, 4)));
    }
}
