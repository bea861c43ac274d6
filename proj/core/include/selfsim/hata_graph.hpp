#pragma once

// Piece-intersection graphs. An attractor is connected exactly when the graph
// whose nodes are the first-level pieces and whose edges join intersecting
// pieces is connected, so connectivity questions reduce to graph search once
// an exact intersection predicate is available.

#include "selfsim/errors.hpp"
#include "selfsim/numeric.hpp"

#include <nlohmann/json.hpp>

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace selfsim {

enum class ContactKind { Point, Segment, UnknownNonempty };

const char* to_string(ContactKind k);

struct Contact {
    ContactKind kind = ContactKind::UnknownNonempty;
    std::optional<Point2> witness;
};

struct GraphEdge {
    std::size_t a = 0;
    std::size_t b = 0;
    Contact contact;
};

class PieceGraph {
public:
    explicit PieceGraph(std::vector<std::string> labels = {});

    std::size_t node_count() const { return labels_.size(); }
    const std::vector<std::string>& labels() const { return labels_; }
    const std::vector<GraphEdge>& edges() const { return edges_; }

    std::size_t add_node(std::string label);
    /// Throws InvalidParameter for self-loops or unknown nodes.
    void add_edge(std::size_t a, std::size_t b, Contact contact);

private:
    std::vector<std::string> labels_;
    std::vector<GraphEdge> edges_;
};

/// Raised when an intersection predicate fails; names the offending pair.
class PredicateError : public Error {
public:
    PredicateError(std::string a, std::string b, const std::string& what);
    const char* kind() const noexcept override { return "predicate"; }
    const std::string& first() const { return a_; }
    const std::string& second() const { return b_; }

private:
    std::string a_;
    std::string b_;
};

/// One node per piece, an edge for every unordered pair where `intersects`
/// returns a contact.
template <class Piece, class Predicate, class Labeler>
PieceGraph build_graph(std::span<const Piece> pieces, Predicate&& intersects, Labeler&& label) {
    std::vector<std::string> labels;
    labels.reserve(pieces.size());
    for (const Piece& piece : pieces) labels.push_back(label(piece));
    PieceGraph g(labels);
    for (std::size_t i = 0; i < pieces.size(); ++i) {
        for (std::size_t j = i + 1; j < pieces.size(); ++j) {
            std::optional<Contact> c;
            try {
                c = intersects(pieces[i], pieces[j]);
            } catch (const std::exception& e) {
                throw PredicateError(labels[i], labels[j], e.what());
            }
            if (c) g.add_edge(i, j, *c);
        }
    }
    return g;
}

struct Partition {
    std::size_t count = 0;
    std::vector<std::size_t> component_of;  // component id per node, ids in order of first node
};

using EdgeFilter = std::function<bool(const GraphEdge&)>;

Partition components(const PieceGraph& g, const EdgeFilter& keep = {});
bool is_connected_hata(const PieceGraph& g, const EdgeFilter& keep = {});

/// {"nodes": [...], "adjacency": {label: [labels...]}, "edges": [{a, b, kind, witness}]}
nlohmann::json to_json(const PieceGraph& g);

}  // namespace selfsim
