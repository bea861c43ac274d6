#pragma once

// Cross-checks that recompute library results by routes that share no code
// with the library's own predicates: a state-graph decision of attractor
// membership, truncated boundary expansions, and brute-force enumeration.

#include "selfsim/family_diag.hpp"
#include "selfsim/family_shift.hpp"
#include "selfsim/ifs.hpp"
#include "selfsim/numeric.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace selfsim::oracle {

/// Decides z in T(p, D) exactly for rational z. States are points w with
/// w -> p w - d; a state survives while it stays in the hull and has a
/// surviving successor. Throws ResourceError past `state_budget` states.
bool attractor_contains(const DigitSet& ds, const Point2& z, std::size_t state_budget = std::size_t{1} << 20);

/// Endpoints of the lower cell's top edge and the upper cell's bottom edge for
/// G_{0^n 0} and G_{0^n 1}, summed digit by digit up to `digits` terms.
struct TruncatedEdges {
    Rational lower_left;   // approximates the left end of the lower cell's top edge
    Rational upper_left;   // approximates the left end of the upper cell's bottom edge
    Rational error_bound;  // both are within this of their limits
};
TruncatedEdges strip_edges_by_expansion(const ShiftParams& params, long n, long digits);

/// Component count of the level-n strip graph built from explicit edge
/// intervals, counting only segment contacts. p > 0.
long strip_components(const ShiftParams& params, long n);

/// Translation classes of point pairs in anchored boxes of D_k, by brute force.
std::size_t census_pairs(const ShiftParams& params, const Rational& c, long k);

/// Points of D_k listed from the closed form (m2 + hat(m1) eps, m1).
std::vector<Point2> closed_form_patch(const ShiftParams& params, long k);

struct SuiteResult {
    std::string suite;
    std::size_t checks = 0;
    std::vector<std::string> failures;
    bool ok() const { return failures.empty(); }
};

SuiteResult run_strips(std::uint64_t seed = 20240601, std::size_t count = 50);
SuiteResult run_components(std::size_t count = 200);
SuiteResult run_diag(std::size_t count = 300);
SuiteResult run_census();

/// "strips", "components", "diag" or "census"; throws InvalidParameter otherwise.
SuiteResult run_suite(const std::string& name);

}  // namespace selfsim::oracle
