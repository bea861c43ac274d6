#pragma once

/**
 * @file family_shift.hpp
 * @brief Tiles generated by pI and the x-shifted digit set {(i + b_j, j)}.
 *
 * Here |p| = 2m + 1 and b_j is eps for odd j and 0 for even j. The attractor
 * is cut into horizontal strip cells G_{j1...jn}; two adjacent cells meet on a
 * single horizontal line, and whether they share a segment, a point or
 * nothing is decided exactly from the offset between their cross-sections.
 *
 * All strip geometry is computed in the analysis frame: for p > 0 that is the
 * digit set itself, for p < 0 it is the squared system (p^2, D + pD), where the
 * shift table is no longer a parity function. Strip levels are counted in the
 * base of the analysis frame.
 */

#include "selfsim/hata_graph.hpp"
#include "selfsim/ifs.hpp"
#include "selfsim/numeric.hpp"

#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace selfsim {

struct ShiftParams {
    long p = 3;
    long m = 1;
    Rational eps;

    /// Validates |p| odd and >= 3.
    static ShiftParams make(long p, Rational eps);
};

/// A strip address j_1 ... j_n with letters in {-m, ..., m}.
using Address = std::vector<long>;

/// The analysis frame: positive odd scale P, m = (P - 1) / 2, x-shift b_j per row digit.
class StripSystem {
public:
    explicit StripSystem(const ShiftParams& params);

    long scale() const { return scale_; }
    long m() const { return m_; }
    const ShiftParams& params() const { return params_; }
    bool squared() const { return params_.p < 0; }

    const Rational& b(long j) const;
    /// sum_t b_{j_t} / P^t
    Rational b_of(const Address& a) const;
    /// sum_t j_t / P^t
    Rational y_of(const Address& a) const;

    DigitSet digits() const;
    void check_address(const Address& a) const;

private:
    ShiftParams params_;
    long scale_;
    long m_;
    std::vector<Rational> b_;  // indexed by j + m
};

/// The x-shifted digit set for the original p (which may be negative), in
/// lexicographic (i, j) order with i, j in {-m..m}.
DigitSet build_shift_digits(const ShiftParams& params);

struct StripCell {
    Address address;
    Interval y_range;
    Rational x_offset;
};

StripCell strip_cell(const StripSystem& sys, const Address& address);

/// Cross-sections of G_{0..0 0} and G_{0..0 1} on their common ordinate.
struct IntervalPair {
    Interval i1;
    Interval i2;
    Rational y_meet;
};

IntervalPair strip_interval_pair(const ShiftParams& params, long n);

struct StripContact {
    OverlapKind kind = OverlapKind::Empty;
    Rational y;                     // the shared ordinate, when the ranges touch
    std::optional<Point2> point;    // Point contacts
    std::optional<Segment> segment; // Segment contacts
};

/// Classifies G_{0^n 0} ∩ G_{0^n 1}.
StripContact classify_strip_intersection(const ShiftParams& params, long n);

/// Intersection type of two strip cells with addresses of equal length.
StripContact classify_strip_pair(const StripSystem& sys, const Address& a, const Address& b);

bool nonadjacent_strips_disjoint(const ShiftParams& params, const Address& j0, long k, long l);

/// (b(j0), p(j0)) with G_{j0} = G_{0..0} + that vector.
Point2 strip_translation(const ShiftParams& params, const Address& j0);

/// All addresses of length n in increasing y order.
std::vector<Address> strip_addresses(const StripSystem& sys, long n);

/// Strip adjacency graph at level n: edge tags are Point or Segment.
PieceGraph strip_graph(const StripSystem& sys, long n);

struct TopologyReport {
    long p = 0;
    Rational eps;
    bool is_tile = true;
    long cell_level = 0;
    BigInt component_count;
    bool cells_disklike = true;
    bool global_disklike = true;
    /// Graph check, filled when the level fits the graph budget.
    std::optional<long> graph_level;
    std::optional<long> graph_interior_components;
    std::optional<long> graph_closed_components;
};

inline constexpr std::size_t kDefaultStripGraphBudget = 6561;

/// Closed-form interior component count, cross-checked against the strip graph.
/// Throws ConsistencyError if the two disagree.
TopologyReport component_count(const ShiftParams& params,
                               std::size_t graph_budget = kDefaultStripGraphBudget);

/// Horizontal shift l_s of row s of the tiling set {(n + l_s, s)}.
using RowShift = std::function<Rational(const BigInt& s)>;

enum class MembershipKind { Inside, Boundary, Unresolved };

const char* to_string(MembershipKind k);

struct Membership {
    MembershipKind kind = MembershipKind::Unresolved;
    std::optional<Point2> translate;  // Inside only
    std::string reason;               // Boundary / Unresolved detail
};

/// Balanced base-P expansion of a rational r in (-1/2, 1/2): digits of the
/// pre-period followed by the repeating period. Empty optional when some
/// remainder hits +-1/2 (two expansions) or the cycle exceeds the budget.
struct BalancedExpansion {
    std::vector<long> preperiod;
    std::vector<long> period;
    bool ambiguous = false;
    bool exhausted = false;
};

BalancedExpansion balanced_expansion(const Rational& r, long scale, std::size_t max_digits);

/// Which translate of T in the tiling set {(n + l_s, s)} contains x.
Membership tiling_membership(const ShiftParams& params, const Point2& x, std::size_t depth_budget,
                             const RowShift& row_shift = {});

/// Translates (n + l_s, s) for n in [n_lo, n_hi], s in [s_lo, s_hi].
std::vector<Point2> tiling_lattice_patch(long n_lo, long n_hi, long s_lo, long s_hi,
                                         const RowShift& row_shift = {});

}  // namespace selfsim
