/*
 * graph.hpp
 *
 * Immutable undirected simple graph in compressed row form, plus the
 * labelled network wrapper produced by the edge-list loader.
 */

#pragma once

#include <algorithm>
#include <fstream>
#include <cstddef>
#include <cstdint>
#include <istream>
#include <numeric>
#include <ostream>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

namespace ueoc {

using NodeId = std::uint32_t;
using Edge = std::pair<NodeId, NodeId>;

class GraphError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class ParseError : public GraphError {
public:
    ParseError(std::size_t line, const std::string& what)
        : GraphError("line " + std::to_string(line) + ": " + what), line_(line) {}

    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

/**
 * Undirected graph without self-loops or parallel edges. Neighbor lists are
 * sorted ascending, which every downstream kernel relies on for deterministic
 * iteration order.
 */
class Graph {
public:
    Graph() = default;

    /// Builds from an arbitrary edge list over [0, n). Self-loops and repeated
    /// edges are removed; nodes may end up with degree zero.
    static Graph from_edges(std::size_t n, std::span<const Edge> edges) {
        std::vector<Edge> canon;
        canon.reserve(edges.size());
        for (auto [u, v] : edges) {
            if (u >= n || v >= n)
                throw GraphError("edge endpoint out of range");
            if (u == v)
                continue;
            canon.emplace_back(std::min(u, v), std::max(u, v));
        }
        std::sort(canon.begin(), canon.end());
        canon.erase(std::unique(canon.begin(), canon.end()), canon.end());

        Graph g;
        g.offsets_.assign(n + 1, 0);
        for (auto [u, v] : canon) {
            ++g.offsets_[u + 1];
            ++g.offsets_[v + 1];
        }
        std::partial_sum(g.offsets_.begin(), g.offsets_.end(), g.offsets_.begin());
        g.targets_.resize(g.offsets_[n]);
        std::vector<std::size_t> fill(g.offsets_.begin(), g.offsets_.end() - 1);
        // canon is sorted by (min, max): pushing both directions in this order
        // already yields ascending neighbor lists for the lower endpoint, but
        // not for the upper one, so sort each row afterwards.
        for (auto [u, v] : canon) {
            g.targets_[fill[u]++] = v;
            g.targets_[fill[v]++] = u;
        }
        for (std::size_t i = 0; i < n; ++i)
            std::sort(g.targets_.begin() + static_cast<std::ptrdiff_t>(g.offsets_[i]),
                      g.targets_.begin() + static_cast<std::ptrdiff_t>(g.offsets_[i + 1]));
        g.edge_count_ = canon.size();
        return g;
    }

    std::size_t node_count() const noexcept { return offsets_.empty() ? 0 : offsets_.size() - 1; }
    std::size_t edge_count() const noexcept { return edge_count_; }
    /// Sum of all degrees, i.e. 2m.
    std::size_t total_degree() const noexcept { return targets_.size(); }

    std::size_t degree(NodeId i) const {
        check(i);
        return offsets_[i + 1] - offsets_[i];
    }

    std::span<const NodeId> neighbors(NodeId i) const {
        check(i);
        return {targets_.data() + offsets_[i], offsets_[i + 1] - offsets_[i]};
    }

    bool has_edge(NodeId u, NodeId v) const {
        auto nb = neighbors(u);
        return std::binary_search(nb.begin(), nb.end(), v);
    }

    /// Each undirected edge once, as (u, v) with u < v, in ascending order.
    std::vector<Edge> edges() const {
        std::vector<Edge> out;
        out.reserve(edge_count_);
        for (NodeId u = 0; u < node_count(); ++u)
            for (NodeId v : neighbors(u))
                if (u < v)
                    out.emplace_back(u, v);
        return out;
    }

    bool operator==(const Graph&) const = default;

private:
    void check(NodeId i) const {
        if (i >= node_count())
            throw GraphError("node id " + std::to_string(i) + " out of range");
    }

    std::vector<std::size_t> offsets_;
    std::vector<NodeId> targets_;
    std::size_t edge_count_ = 0;
};

/// Partition of the nodes into maximal connected sets. Components are ordered
/// by their smallest node id and each is sorted ascending.
inline std::vector<std::vector<NodeId>> connected_components(const Graph& g) {
    const std::size_t n = g.node_count();
    std::vector<bool> seen(n, false);
    std::vector<std::vector<NodeId>> out;
    std::vector<NodeId> stack;
    for (NodeId root = 0; root < n; ++root) {
        if (seen[root])
            continue;
        std::vector<NodeId> comp;
        seen[root] = true;
        stack.push_back(root);
        while (!stack.empty()) {
            NodeId u = stack.back();
            stack.pop_back();
            comp.push_back(u);
            for (NodeId v : g.neighbors(u))
                if (!seen[v]) {
                    seen[v] = true;
                    stack.push_back(v);
                }
        }
        std::sort(comp.begin(), comp.end());
        out.push_back(std::move(comp));
    }
    return out;
}

/// Subgraph induced by `nodes` (which must be sorted ascending); node k of the
/// result corresponds to nodes[k].
inline Graph induced_subgraph(const Graph& g, std::span<const NodeId> nodes) {
    std::vector<NodeId> local(g.node_count(), static_cast<NodeId>(-1));
    for (std::size_t k = 0; k < nodes.size(); ++k)
        local[nodes[k]] = static_cast<NodeId>(k);
    std::vector<Edge> edges;
    for (NodeId u : nodes)
        for (NodeId v : g.neighbors(u))
            if (u < v && local[v] != static_cast<NodeId>(-1))
                edges.emplace_back(local[u], local[v]);
    return Graph::from_edges(nodes.size(), edges);
}

/**
 * A graph together with the original node labels. Isolated nodes are not
 * part of `graph`; their labels are kept in `isolated` so that covers can
 * report them as singleton communities.
 */
struct Network {
    Graph graph;
    std::vector<std::string> labels;
    std::vector<std::string> isolated;
    std::size_t self_loops_dropped = 0;

    const std::string& label(NodeId i) const { return labels.at(i); }

    /// Internal id for a label, or -1 when the label is unknown or isolated.
    std::int64_t find(const std::string& label) const {
        if (index_.empty() && !labels.empty())
            rebuild_index();
        auto it = index_.find(label);
        return it == index_.end() ? -1 : static_cast<std::int64_t>(it->second);
    }

    bool is_isolated(const std::string& label) const {
        return std::find(isolated.begin(), isolated.end(), label) != isolated.end();
    }

    /// Assembles a network from edges over labelled nodes [0, labels.size()),
    /// stripping nodes that end up with degree zero.
    static Network build(std::vector<std::string> all_labels, std::span<const Edge> edges,
                         std::size_t self_loops = 0) {
        const std::size_t n = all_labels.size();
        Graph full = Graph::from_edges(n, edges);
        Network net;
        net.self_loops_dropped = self_loops;
        std::vector<NodeId> keep;
        for (NodeId i = 0; i < n; ++i) {
            if (full.degree(i) == 0)
                net.isolated.push_back(all_labels[i]);
            else
                keep.push_back(i);
        }
        if (keep.empty())
            throw GraphError("graph has no edges");
        if (keep.size() == n) {
            net.graph = std::move(full);
            net.labels = std::move(all_labels);
        } else {
            net.graph = induced_subgraph(full, keep);
            for (NodeId i : keep)
                net.labels.push_back(std::move(all_labels[i]));
        }
        return net;
    }

private:
    void rebuild_index() const {
        index_.clear();
        for (NodeId i = 0; i < labels.size(); ++i)
            index_.emplace(labels[i], i);
    }

    mutable std::unordered_map<std::string, NodeId> index_;
};

/**
 * Reads a whitespace-separated edge list. Lines starting with '#' and blank
 * lines are skipped. Labels are mapped to dense ids in first-seen order.
 */
inline Network load_edge_list(std::istream& in) {
    std::unordered_map<std::string, NodeId> ids;
    std::vector<std::string> labels;
    std::vector<Edge> edges;
    std::size_t self_loops = 0;

    auto intern = [&](const std::string& s) {
        auto [it, inserted] = ids.emplace(s, static_cast<NodeId>(labels.size()));
        if (inserted)
            labels.push_back(s);
        return it->second;
    };

    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        auto first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos || line[first] == '#')
            continue;
        std::istringstream ls(line);
        std::string a, b, extra;
        if (!(ls >> a >> b))
            throw ParseError(lineno, "expected two node labels");
        if (ls >> extra)
            throw ParseError(lineno, "unexpected third field '" + extra + "'");
        NodeId u = intern(a);
        NodeId v = intern(b);
        if (u == v) {
            ++self_loops;
            continue;
        }
        edges.emplace_back(u, v);
    }
    if (labels.empty())
        throw GraphError("empty graph");
    return Network::build(std::move(labels), edges, self_loops);
}

inline Network parse_edge_list(const std::string& text) {
    std::istringstream in(text);
    return load_edge_list(in);
}

inline Network load_edge_list_file(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw GraphError("cannot open '" + path + "'");
    return load_edge_list(in);
}

/// Writes each edge once using the network's labels, in internal id order.
inline void write_edge_list(const Network& net, std::ostream& out) {
    for (auto [u, v] : net.graph.edges())
        out << net.labels[u] << ' ' << net.labels[v] << '\n';
}

} // namespace ueoc
