#pragma once

/**
 * @file tiling_qp.hpp
 * @brief The translate sets D_k = D + A D + ... + A^(k-1) D of the x-shifted
 *        family and the checks behind its quasi-periodicity.
 *
 * Every translate has the form (m2 + hat(m1) * eps, m1), where m1 and m2 are
 * integers whose balanced base-p expansions have at most k digits and hat()
 * keeps only the parity of each balanced digit. That closed form gives a
 * membership test that does not enumerate anything, and it bounds the number
 * of distinct difference vectors inside a box when eps is rational.
 */

#include "selfsim/family_shift.hpp"
#include "selfsim/numeric.hpp"

#include <nlohmann/json.hpp>

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

namespace selfsim {

/// Balanced base-p digits, least significant first; empty for zero.
using BalancedDigits = std::vector<long>;

/// The unique finite expansion n = sum digits[t] p^t with digits in {-m..m}.
/// Accepts negative odd p. Throws InvalidParameter for even p or |p| < 3.
BalancedDigits balanced_digits(const BigInt& n, long p);
BigInt balanced_value(const BalancedDigits& digits, long p);

/// sum over t of (digit_t odd) p^t.
BigInt hat(const BigInt& m1, long p);

struct TranslateSet {
    long level = 0;
    std::vector<Point2> points;  // sorted, no duplicates

    bool contains(const Point2& t) const;
};

inline constexpr std::size_t kDefaultPatchBudget = std::size_t{1} << 22;

/// D_k built by the recursion D_k = D + A D_(k-1). Throws ResourceError when
/// |p|^(2k) exceeds the budget.
TranslateSet dset_k(const ShiftParams& params, long k, std::size_t budget = kDefaultPatchBudget);

/// Closed-form membership in D_k, independent of the enumeration.
bool in_dset(const ShiftParams& params, long k, const Point2& t);

/// Integers (m1, m2) with t = (m2 + hat(m1) eps, m1), when they exist.
std::optional<std::pair<BigInt, BigInt>> closed_form_coordinates(const ShiftParams& params, const Point2& t);

/// A t + D is contained in the next level. Throws DomainError when t is not in
/// `level`; `next` must be level + 1.
bool self_replication_check(const ShiftParams& params, const TranslateSet& level, const TranslateSet& next,
                            const Point2& t);
/// Convenience form that builds D_k and D_(k+1).
bool self_replication_check(const ShiftParams& params, long k, const Point2& t);

struct CensusReport {
    long level = 0;
    Rational box_side;
    std::size_t arity = 2;
    std::size_t boxes = 0;
    std::size_t classes = 0;  // translation classes of point configurations
    /// (2C + 1) * b (2C + 1) with C = ceil(c); set for arity 2 only.
    std::optional<BigInt> bound;
};

/// Counts translation classes of `arity`-point configurations of D_k that
/// fit in an axis-parallel square of side c, each found from its least point.
CensusReport local_finiteness_census(const ShiftParams& params, const Rational& c, long k, std::size_t arity = 2,
                                     unsigned threads = 0);

struct WitnessPair {
    long k = 0;
    long double tx = 0, ty = 0;    // t_k
    long double tx2 = 0, ty2 = 0;  // t_k'
    long double distance() const;
    long double x_difference() const { return tx2 - tx; }
};

/// The pairs t_k, t_k' for k = 1..k_max with n2 = 0 and m2 = floor(eps p^k).
/// Float demonstration only: p must be odd, >= 3, and k_max <= 30.
std::vector<WitnessPair> irrational_witness_pairs(long p, long double eps, long k_max);

/// Distinct x-differences across the pairs at the given resolution.
std::size_t distinct_x_differences(const std::vector<WitnessPair>& pairs, long double resolution = 1e-9L);

struct QuasiPeriodicReport {
    long p = 0;
    std::string eps;  // "a/b" in exact mode, the decimal text in demo mode
    bool quasi_periodic = true;
    bool certified = true;
    std::optional<CensusReport> census;
    std::vector<WitnessPair> witnesses;
    std::size_t distinct_classes = 0;
};

/// Exact input: always quasi-periodic, with a census as evidence.
QuasiPeriodicReport is_quasi_periodic(const ShiftParams& params, const Rational& c = Rational(2), long k = 3);
/// Float input: a non-certified verdict from the witness pairs. Reports
/// NotQuasiPeriodic when at least k_max - 1 distinct x-differences appear.
QuasiPeriodicReport is_quasi_periodic_demo(long p, long double eps, const std::string& eps_text, long k_max = 10);

struct LocalIsomorphismReport {
    long level = 0;
    Rational radius_squared;  // (3R)^2 with R the diagonal of the level-l hull
    std::size_t balls = 0;
    std::size_t contained = 0;
};

/// For each centre x in D_(l+2), strips the l low digits of x to get d' and
/// checks that d' + sigma lies in D_(l+2) and inside the ball of radius 3R at x.
LocalIsomorphismReport local_isomorphism_check(const ShiftParams& params, long ell, const std::vector<Point2>& sigma,
                                               const std::vector<Point2>& centres);

nlohmann::json to_json(const CensusReport& r);
nlohmann::json to_json(const QuasiPeriodicReport& r);

/// One point per line, "xn/xd yn/yd", in sorted order.
std::string patch_text(const TranslateSet& set);

}  // namespace selfsim
