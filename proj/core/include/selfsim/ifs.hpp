#pragma once

// Digit sets, contractions x -> (x + d) / p, finite words and attractor
// sampling for the similarity A = pI.

#include "selfsim/numeric.hpp"

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace selfsim {

/// x -> scale_inv * x + offset, where scale_inv = 1 / p^power.
class AffineMap {
public:
    /// The elementary contraction x -> (x + digit) / p.
    static AffineMap contraction(long p, const Point2& digit);

    long base() const { return p_; }
    long power() const { return power_; }
    const Rational& scale_inv() const { return scale_inv_; }
    const Point2& offset() const { return offset_; }

    Point2 apply(const Point2& x) const { return x * scale_inv_ + offset_; }

    friend bool operator==(const AffineMap& a, const AffineMap& b) {
        return a.scale_inv_ == b.scale_inv_ && a.offset_ == b.offset_;
    }

private:
    AffineMap(long p, long power, Rational scale_inv, Point2 offset);
    friend AffineMap compose(const AffineMap& outer, const AffineMap& inner);

    long p_;
    long power_;
    Rational scale_inv_;
    Point2 offset_;
};

/// outer ∘ inner. Throws InvalidParameter when the bases differ.
AffineMap compose(const AffineMap& outer, const AffineMap& inner);
bool map_equal(const AffineMap& a, const AffineMap& b);

/// The unique x with m(x) = x.
Point2 fixed_point(const AffineMap& m);

/// A digit set for A = pI. labels[k] is the (i, j) index pair digit k was built from.
struct DigitSet {
    long p = 0;
    std::vector<Point2> digits;
    std::vector<std::pair<long, long>> labels;

    std::size_t size() const { return digits.size(); }
    /// Index of the digit with label (i, j); throws AddressError if absent.
    std::size_t index_of(long i, long j) const;
    AffineMap map(std::size_t k) const;
};

/// A finite address: a sequence of digit indices (not digit values).
struct Word {
    std::vector<std::size_t> letters;

    std::size_t size() const { return letters.size(); }
    Word operator+(const Word& o) const;
    friend bool operator==(const Word&, const Word&) = default;
};

/// Sum over k of p^-k d_{w_k}, evaluated exactly.
Point2 eval_word(const DigitSet& ds, const Word& w);

/// Composition f_{w_1} ∘ ... ∘ f_{w_n}; the empty word is rejected.
AffineMap word_map(const DigitSet& ds, const Word& w);

/// Default cap on the number of points an enumeration may produce.
inline constexpr std::size_t kDefaultPointBudget = std::size_t{1} << 22;

/// All eval_word(w) with |w| = depth, in lexicographic word order.
std::vector<Point2> sample_attractor(const DigitSet& ds, int depth,
                                     std::size_t budget = kDefaultPointBudget);

/// Exact axis-aligned hull of the attractor.
struct Box {
    Interval x;
    Interval y;
};

Box attractor_bounds(const DigitSet& ds);

/// The digit set D + A D of the squared system, so that T(p, D) = T(p^2, D + pD).
/// Digit (outer k, inner t) is d_t + p d_k, labelled by the combined index pair.
DigitSet square_digits(const DigitSet& ds);

/// Depth-level samples held as integer numerators over a common denominator:
/// point = (x_num, y_num) / denominator. Used by the raster fast path.
class LatticeSampler {
public:
    LatticeSampler(const DigitSet& ds, int depth);

    int depth() const { return depth_; }
    /// p^depth * lcm(digit denominators).
    std::int64_t denominator() const { return denominator_; }
    std::size_t count() const { return count_; }

    /// Calls visit(worker, x_num, y_num) for every word, splitting the first letter
    /// across `threads` workers. worker is in [0, threads), so per-worker buffers
    /// need no locking.
    void for_each(const std::function<void(std::size_t worker, std::int64_t, std::int64_t)>& visit,
                  unsigned threads = 1) const;

private:
    long p_;
    int depth_;
    std::int64_t denominator_ = 1;
    std::size_t count_ = 0;
    std::vector<std::int64_t> dx_;  // digit numerators over lcm
    std::vector<std::int64_t> dy_;
    std::vector<std::int64_t> powers_;  // p^(depth-k) for k = 1..depth
};

}  // namespace selfsim
