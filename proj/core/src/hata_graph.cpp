#include "selfsim/hata_graph.hpp"

#include <numeric>

namespace selfsim {

const char* to_string(ContactKind k) {
    switch (k) {
        case ContactKind::Point: return "Point";
        case ContactKind::Segment: return "Segment";
        case ContactKind::UnknownNonempty: return "Unknown-nonempty";
    }
    return "?";
}

PieceGraph::PieceGraph(std::vector<std::string> labels) : labels_(std::move(labels)) {}

std::size_t PieceGraph::add_node(std::string label) {
    labels_.push_back(std::move(label));
    return labels_.size() - 1;
}

void PieceGraph::add_edge(std::size_t a, std::size_t b, Contact contact) {
    if (a >= labels_.size() || b >= labels_.size()) throw InvalidParameter("edge endpoint out of range");
    if (a == b) throw InvalidParameter("self-loop on node " + labels_[a]);
    edges_.push_back(GraphEdge{a, b, std::move(contact)});
}

PredicateError::PredicateError(std::string a, std::string b, const std::string& what)
    : Error("intersection predicate failed on (" + a + ", " + b + "): " + what), a_(std::move(a)), b_(std::move(b)) {}

namespace {

struct DisjointSet {
    std::vector<std::size_t> parent;
    explicit DisjointSet(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
    std::size_t find(std::size_t x) {
        while (parent[x] != x) {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        return x;
    }
    void unite(std::size_t a, std::size_t b) {
        a = find(a);
        b = find(b);
        if (a != b) parent[std::max(a, b)] = std::min(a, b);
    }
};

}  // namespace

Partition components(const PieceGraph& g, const EdgeFilter& keep) {
    DisjointSet dsu(g.node_count());
    for (const GraphEdge& e : g.edges()) {
        if (!keep || keep(e)) dsu.unite(e.a, e.b);
    }
    Partition out;
    out.component_of.assign(g.node_count(), 0);
    std::vector<std::size_t> id_of_root(g.node_count(), static_cast<std::size_t>(-1));
    for (std::size_t v = 0; v < g.node_count(); ++v) {
        const std::size_t r = dsu.find(v);
        if (id_of_root[r] == static_cast<std::size_t>(-1)) id_of_root[r] = out.count++;
        out.component_of[v] = id_of_root[r];
    }
    return out;
}

bool is_connected_hata(const PieceGraph& g, const EdgeFilter& keep) {
    return components(g, keep).count <= 1;
}

nlohmann::json to_json(const PieceGraph& g) {
    nlohmann::json adjacency = nlohmann::json::object();
    for (const auto& label : g.labels()) adjacency[label] = nlohmann::json::array();
    nlohmann::json edges = nlohmann::json::array();
    for (const GraphEdge& e : g.edges()) {
        adjacency[g.labels()[e.a]].push_back(g.labels()[e.b]);
        adjacency[g.labels()[e.b]].push_back(g.labels()[e.a]);
        nlohmann::json edge{{"a", g.labels()[e.a]}, {"b", g.labels()[e.b]}, {"kind", to_string(e.contact.kind)}};
        if (e.contact.witness) edge["witness"] = {e.contact.witness->x.str(), e.contact.witness->y.str()};
        edges.push_back(std::move(edge));
    }
    return {{"nodes", g.labels()}, {"adjacency", std::move(adjacency)}, {"edges", std::move(edges)}};
}

}  // namespace selfsim
