#include "selfsim/ifs.hpp"

#include "selfsim/errors.hpp"

#include <algorithm>
#include <limits>
#include <thread>

namespace selfsim {

AffineMap::AffineMap(long p, long power, Rational scale_inv, Point2 offset)
    : p_(p), power_(power), scale_inv_(std::move(scale_inv)), offset_(std::move(offset)) {}

AffineMap AffineMap::contraction(long p, const Point2& digit) {
    if (p == 0 || p == 1 || p == -1) throw InvalidParameter("contraction needs |p| >= 2, got " + std::to_string(p));
    const Rational inv(1L, p);
    return {p, 1, inv, digit * inv};
}

AffineMap compose(const AffineMap& outer, const AffineMap& inner) {
    if (outer.p_ != inner.p_) {
        throw InvalidParameter("cannot compose maps with bases " + std::to_string(outer.p_) + " and " +
                               std::to_string(inner.p_));
    }
    return {outer.p_, outer.power_ + inner.power_, outer.scale_inv_ * inner.scale_inv_, outer.apply(inner.offset_)};
}

bool map_equal(const AffineMap& a, const AffineMap& b) {
    return a == b;
}

Point2 fixed_point(const AffineMap& m) {
    // x = s x + o  =>  x = o / (1 - s)
    return m.offset() / (Rational(1) - m.scale_inv());
}

std::size_t DigitSet::index_of(long i, long j) const {
    for (std::size_t k = 0; k < labels.size(); ++k) {
        if (labels[k].first == i && labels[k].second == j) return k;
    }
    throw AddressError("no digit labelled (" + std::to_string(i) + ", " + std::to_string(j) + ")");
}

AffineMap DigitSet::map(std::size_t k) const {
    if (k >= digits.size()) throw AddressError("digit index " + std::to_string(k) + " out of range");
    return AffineMap::contraction(p, digits[k]);
}

Word Word::operator+(const Word& o) const {
    Word out{letters};
    out.letters.insert(out.letters.end(), o.letters.begin(), o.letters.end());
    return out;
}

Point2 eval_word(const DigitSet& ds, const Word& w) {
    const Rational p(ds.p);
    Point2 acc{0, 0};
    // Horner from the innermost letter outwards.
    for (auto it = w.letters.rbegin(); it != w.letters.rend(); ++it) {
        if (*it >= ds.digits.size()) throw AddressError("letter " + std::to_string(*it) + " out of range");
        acc = (acc + ds.digits[*it]) / p;
    }
    return acc;
}

AffineMap word_map(const DigitSet& ds, const Word& w) {
    if (w.letters.empty()) throw AddressError("empty word has no map");
    AffineMap m = ds.map(w.letters.front());
    for (std::size_t k = 1; k < w.letters.size(); ++k) m = compose(m, ds.map(w.letters[k]));
    return m;
}

std::vector<Point2> sample_attractor(const DigitSet& ds, int depth, std::size_t budget) {
    if (depth < 1) throw InvalidParameter("sample depth must be >= 1");
    const std::size_t n = ds.size();
    std::size_t total = 1;
    for (int k = 0; k < depth; ++k) {
        if (total > budget / std::max<std::size_t>(n, 1)) {
            throw ResourceError("sampling " + std::to_string(n) + "^" + std::to_string(depth) +
                                " points exceeds the budget of " + std::to_string(budget));
        }
        total *= n;
    }

    // Level by level: S_k = { (d + s) / p : d in D, s in S_{k-1} } keeps lexicographic order
    // when the outer letter varies slowest.
    const Rational p(ds.p);
    std::vector<Point2> level{Point2{0, 0}};
    for (int k = 0; k < depth; ++k) {
        std::vector<Point2> next;
        next.reserve(level.size() * n);
        for (const Point2& d : ds.digits) {
            for (const Point2& s : level) next.push_back((s + d) / p);
        }
        level = std::move(next);
    }
    return level;
}

Box attractor_bounds(const DigitSet& ds) {
    if (ds.digits.empty()) throw InvalidParameter("empty digit set");
    const auto axis = [&](auto coord) {
        Rational lo = coord(ds.digits.front());
        Rational hi = lo;
        for (const Point2& d : ds.digits) {
            lo = std::min(lo, coord(d));
            hi = std::max(hi, coord(d));
        }
        if (ds.p > 0) {
            const Rational den(ds.p - 1);
            return Interval(lo / den, hi / den);
        }
        // p = -q: the hull [a, b] satisfies b = -(a + lo)/q, a = -(b + hi)/q.
        const Rational q(-ds.p);
        const Rational upper = (hi - q * lo) / (q * q - Rational(1));
        const Rational lower = -(upper + hi) / q;
        return Interval(lower, upper);
    };
    return Box{axis([](const Point2& d) { return d.x; }), axis([](const Point2& d) { return d.y; })};
}

DigitSet square_digits(const DigitSet& ds) {
    DigitSet out;
    out.p = ds.p * ds.p;
    const Rational p(ds.p);
    std::vector<std::size_t> order(ds.size() * ds.size());
    out.digits.reserve(order.size());
    out.labels.reserve(order.size());
    for (std::size_t k = 0; k < ds.size(); ++k) {
        for (std::size_t t = 0; t < ds.size(); ++t) {
            out.digits.push_back(ds.digits[t] + ds.digits[k] * p);
            out.labels.emplace_back(ds.labels[t].first + ds.p * ds.labels[k].first,
                                    ds.labels[t].second + ds.p * ds.labels[k].second);
        }
    }
    return out;
}

LatticeSampler::LatticeSampler(const DigitSet& ds, int depth) : p_(ds.p), depth_(depth) {
    if (depth < 1) throw InvalidParameter("sample depth must be >= 1");
    BigInt lcm = 1;
    for (const Point2& d : ds.digits) {
        mpz_lcm(lcm.get_mpz_t(), lcm.get_mpz_t(), d.x.den().get_mpz_t());
        mpz_lcm(lcm.get_mpz_t(), lcm.get_mpz_t(), d.y.den().get_mpz_t());
    }
    const BigInt pd = ipow(p_, static_cast<unsigned long>(depth));
    const BigInt den = abs(pd) * lcm;
    BigInt max_digit = 0;
    for (const Point2& d : ds.digits) {
        const BigInt xn = d.x.num() * (lcm / d.x.den());
        const BigInt yn = d.y.num() * (lcm / d.y.den());
        max_digit = std::max<BigInt>(max_digit, abs(xn));
        max_digit = std::max<BigInt>(max_digit, abs(yn));
        if (!xn.fits_slong_p() || !yn.fits_slong_p()) throw ResourceError("digit numerators overflow 64 bits");
        dx_.push_back(xn.get_si());
        dy_.push_back(yn.get_si());
    }
    // |sum| <= max_digit * (|p|^depth) fits comfortably below 2^62.
    const BigInt bound = max_digit * abs(pd) * 2;
    const BigInt limit = BigInt(1) << 62;
    if (den >= limit || bound >= limit) throw ResourceError("lattice sampling at this depth overflows 64 bits");
    denominator_ = den.get_si();

    count_ = 1;
    for (int k = 0; k < depth; ++k) {
        if (count_ > std::numeric_limits<std::size_t>::max() / ds.size()) throw ResourceError("sample count overflow");
        count_ *= ds.size();
    }
    // Point numerator = sum_k d_k * p^(depth-k) (sign of p^depth folded into the denominator).
    for (int k = 1; k <= depth; ++k) powers_.push_back(ipow(p_, static_cast<unsigned long>(depth - k)).get_si());
    if (sgn(pd) < 0) {
        for (auto& v : powers_) v = -v;
    }
}

void LatticeSampler::for_each(const std::function<void(std::size_t, std::int64_t, std::int64_t)>& visit,
                              unsigned threads) const {
    const std::size_t n = dx_.size();
    const auto run_first = [&](std::size_t worker, std::size_t first) {
        // Odometer over letters 2..depth.
        std::vector<std::size_t> idx(static_cast<std::size_t>(depth_), 0);
        idx[0] = first;
        std::vector<std::int64_t> px(static_cast<std::size_t>(depth_) + 1, 0);
        std::vector<std::int64_t> py(static_cast<std::size_t>(depth_) + 1, 0);
        const auto refresh = [&](std::size_t from) {
            for (std::size_t k = from; k < idx.size(); ++k) {
                px[k + 1] = px[k] + dx_[idx[k]] * powers_[k];
                py[k + 1] = py[k] + dy_[idx[k]] * powers_[k];
            }
        };
        refresh(0);
        while (true) {
            visit(worker, px.back(), py.back());
            std::size_t pos = idx.size();
            while (pos > 1) {
                --pos;
                if (++idx[pos] < n) break;
                idx[pos] = 0;
                if (pos == 1) {
                    pos = 0;
                    break;
                }
            }
            if (pos == 0 || idx.size() == 1) return;
            refresh(pos);
        }
    };

    if (threads <= 1 || n == 1) {
        for (std::size_t f = 0; f < n; ++f) run_first(0, f);
        return;
    }
    const unsigned workers = std::min<unsigned>(threads, static_cast<unsigned>(n));
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) {
        pool.emplace_back([&, w] {
            for (std::size_t f = w; f < n; f += workers) run_first(w, f);
        });
    }
}

}  // namespace selfsim
