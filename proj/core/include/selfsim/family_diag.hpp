#pragma once

/**
 * @file family_diag.hpp
 * @brief Self-similar sets generated by pI and the diagonal-shift digit set
 *        {(i + a_ij, j + a_ij)}, a_ij = eps when i == j.
 *
 * Connectivity is decided by locating a contact between the pieces above the
 * diagonal and the diagonal pieces. Off-diagonal pieces are chained to their
 * neighbours by explicit common points and the diagonal pieces chain along the
 * segment joining the two diagonal fixed points, so the only open question is
 * whether the upper pieces meet the diagonal ones. The certificate records the
 * contact point with the segment and line it lies on, or an exact separation
 * along the line y = x + 1/p.
 */

#include "selfsim/hata_graph.hpp"
#include "selfsim/ifs.hpp"
#include "selfsim/numeric.hpp"

#include <nlohmann/json.hpp>

#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace selfsim {

struct DiagParams {
    long p = 3;
    Rational eps;

    /// Validates |p| >= 3.
    static DiagParams make(long p, Rational eps);
};

/// Index pair (i, j) of the map f_{i,j}.
struct Piece {
    long i = 0;
    long j = 0;
    friend bool operator==(const Piece&, const Piece&) = default;
    friend auto operator<=>(const Piece&, const Piece&) = default;
};

std::string to_string(const Piece& piece);

DigitSet build_diag_digits(const DiagParams& params);

/// f_{i,j}(x) = (x + (i + a_ij, j + a_ij)) / p
AffineMap diag_map(const DiagParams& params, Piece piece);

struct FixedPointTable {
    Point2 t00;       // t_{0,0}
    Point2 t10;       // t_{1,0}
    Point2 t01;       // t_{0,1}
    Point2 t1_last;   // t_{1,p-1}
    Point2 t0_last;   // t_{0,p-1}
    Point2 tlast_0;   // t_{p-1,0}
    Point2 tlast_1;   // t_{p-1,1}
    Point2 tlast_last;  // t_{p-1,p-1}
};

/// The fixed points used by the connectivity argument, each computed from its map.
FixedPointTable fixed_point_table(const DiagParams& params);

/// A common point of f_a(T) and f_b(T) for the four neighbour patterns
/// (horizontal, vertical, anti-diagonal, diagonal); nullopt otherwise.
/// Throws ConsistencyError if the two image expressions disagree. Needs p > 0.
std::optional<Point2> adjacency_witness(const DiagParams& params, Piece a, Piece b);

enum class Verdict { Connected, Disconnected };
enum class CaseTag { I, II, III, IV };

const char* to_string(Verdict v);
const char* to_string(CaseTag c);

struct WitnessEdge {
    Piece a;
    Piece b;
    Point2 point;
};

struct ConnectivityCertificate {
    long p = 0;
    Rational eps;
    Verdict verdict = Verdict::Connected;
    CaseTag case_tag = CaseTag::I;
    std::optional<Point2> witness;
    std::optional<Segment> segment;  // the segment that holds the witness
    std::string line;                // "L5", "L6" or "L3"
    std::optional<std::pair<Rational, Rational>> separation;  // (max x of the upper pieces on L3, min x of the diagonal ones)
    bool reflected = false;          // built from the |eps| certificate by x -> (1,1) - x
    std::vector<WitnessEdge> chain;  // every piece contact used for the connectivity argument
    std::size_t graph_components = 0;
};

/// Evaluates the four-case ladder exactly, replays every witness and builds
/// the piece graph from the recorded contacts. Needs p > 0.
ConnectivityCertificate connectivity_certificate(const DiagParams& params);

/// |eps| <= (|p| - 1)^2 / (|p| - 2); for p > 0 also replays the certificate.
bool is_connected(const DiagParams& params);

/// (|p| - 1)^2 / (|p| - 2)
Rational connectivity_threshold(long p);

struct OscWitness {
    long ell = 0;
    long k = 0;
    std::pair<AffineMap, AffineMap> pair;    // f_{0,0}∘f_{0,p-1} and f_{l,l+1}∘f_{k,k-1}
    std::pair<AffineMap, AffineMap> mirror;  // f_{0,0}∘f_{p-1,0} and f_{l+1,l}∘f_{k-1,k}
};

/// For eps = l + k/p (0 <= l <= p-2, 1 <= k <= p-1) the two distinct words
/// above give the same map, so the open set condition fails. Needs p > 0.
std::optional<OscWitness> osc_failure_witness(const DiagParams& params);

/// All contact edges from adjacency_witness over the p^2 pieces.
std::vector<WitnessEdge> neighbour_witnesses(const DiagParams& params);

/// Graph over the p^2 pieces from a list of contact edges.
PieceGraph piece_graph(long p, const std::vector<WitnessEdge>& edges);

nlohmann::json to_json(const ConnectivityCertificate& cert);

}  // namespace selfsim
