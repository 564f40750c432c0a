/*
 * detect.hpp
 *
 * Unfold (constrained walk + ranking), extract (minimum-conductance sweep)
 * and the driver that assembles a full overlapping cover.
 */

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <set>
#include <span>
#include <stdexcept>
#include <vector>

#include "cover.hpp"
#include "graph.hpp"
#include "walk.hpp"

namespace ueoc {

struct RankedEntry {
    NodeId node;
    double probability;
};

/// Nodes by descending probability, ties by ascending id.
struct RankedNodeList {
    std::vector<RankedEntry> entries;
    NodeId seed = 0;
    int steps = 0;
    bool all_zero = false;

    std::size_t size() const noexcept { return entries.size(); }
    bool empty() const noexcept { return entries.empty(); }

    std::vector<NodeId> order() const {
        std::vector<NodeId> out;
        out.reserve(entries.size());
        for (const auto& e : entries)
            out.push_back(e.node);
        return out;
    }
};

/// Ranks every node of the vector (zeros included, at the tail).
inline RankedNodeList rank_nodes(const ProbabilityVector& v) {
    RankedNodeList out;
    out.entries.reserve(v.size());
    for (NodeId i = 0; i < v.size(); ++i)
        out.entries.push_back({i, v[i]});
    std::sort(out.entries.begin(), out.entries.end(), [](const RankedEntry& a, const RankedEntry& b) {
        if (a.probability != b.probability)
            return a.probability > b.probability;
        return a.node < b.node;
    });
    return out;
}

/// Runs the degree-corrected constrained walk from s and ranks the result.
/// The configured mode is ignored; unfolding always uses the corrected walk.
inline RankedNodeList unfold_community(const Graph& g, NodeId s, WalkConfig cfg) {
    cfg.mode = WalkMode::constrained_degree_corrected;
    auto walk = run_walk(g, s, cfg);
    auto ranked = rank_nodes(walk.vector);
    ranked.seed = s;
    ranked.steps = walk.steps;
    ranked.all_zero = walk.all_zero;
    return ranked;
}

/// Boundary size and volume of a node set, kept as integers.
struct CutState {
    std::int64_t boundary = 0;
    std::int64_t volume = 0;
    std::int64_t total = 0; // 2m

    std::int64_t denominator() const { return std::min(volume, total - volume); }
    double conductance() const {
        return static_cast<double>(boundary) / static_cast<double>(denominator());
    }
    /// Exact comparison of boundary/denominator values.
    bool less_than(const CutState& o) const {
        return boundary * o.denominator() < o.boundary * denominator();
    }
};

/**
 * Incremental conductance along a node ordering. Adding node u with degree
 * d_u and k_u neighbors already inside changes the boundary by d_u − 2 k_u.
 */
class ConductanceSweep {
public:
    explicit ConductanceSweep(const Graph& g)
        : g_(&g), inside_(g.node_count(), false) {
        state_.total = static_cast<std::int64_t>(g.total_degree());
    }

    const CutState& add(NodeId u) {
        if (inside_.at(u))
            throw std::invalid_argument("node already in the sweep set");
        std::int64_t links = 0;
        for (NodeId v : g_->neighbors(u))
            links += inside_[v] ? 1 : 0;
        const auto d = static_cast<std::int64_t>(g_->degree(u));
        state_.boundary += d - 2 * links;
        state_.volume += d;
        inside_[u] = true;
        ++size_;
        return state_;
    }

    const CutState& state() const noexcept { return state_; }
    std::size_t size() const noexcept { return size_; }

private:
    const Graph* g_;
    std::vector<bool> inside_;
    CutState state_;
    std::size_t size_ = 0;
};

struct SweepPoint {
    std::size_t k;
    double conductance;
};

struct Extraction {
    Community community;
    std::size_t cut = 0;             // chosen prefix length
    std::vector<SweepPoint> sweep;   // phi for every evaluated prefix
};

/**
 * Drops zero-probability nodes, evaluates conductance of every prefix of
 * length 1..min(len, n−1) and keeps the smallest minimizer.
 */
inline Extraction extract_with_sweep(const Graph& g, const RankedNodeList& ranked) {
    std::vector<NodeId> order;
    for (const auto& e : ranked.entries)
        if (e.probability > 0)
            order.push_back(e.node);
    if (order.empty())
        throw std::invalid_argument("ranked list has no positive entries");
    const std::size_t limit = std::min(order.size(), g.node_count() - 1);
    if (limit == 0)
        throw std::invalid_argument("graph too small to extract a proper subset");

    Extraction out;
    ConductanceSweep sweep(g);
    CutState best;
    for (std::size_t k = 1; k <= limit; ++k) {
        const auto& st = sweep.add(order[k - 1]);
        out.sweep.push_back({k, st.conductance()});
        if (k == 1 || st.less_than(best)) {
            best = st;
            out.cut = k;
        }
    }
    out.community.members.assign(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(out.cut));
    std::sort(out.community.members.begin(), out.community.members.end());
    out.community.conductance = best.conductance();
    out.community.seed = ranked.seed;
    return out;
}

inline Community extract_community(const Graph& g, const RankedNodeList& ranked) {
    return extract_with_sweep(g, ranked).community;
}

/**
 * Baseline cutoff: nodes whose probability exceeds the mean over all n
 * nodes. When nothing exceeds it (all entries equal) the positive support is
 * returned.
 */
inline Community cutoff_average(const Graph& g, const RankedNodeList& ranked) {
    if (ranked.empty())
        throw std::invalid_argument("ranked list is empty");
    double total = 0;
    for (const auto& e : ranked.entries)
        total += e.probability;
    const double eps = total / static_cast<double>(g.node_count());
    Community c;
    c.seed = ranked.seed;
    for (const auto& e : ranked.entries)
        if (e.probability > eps)
            c.members.push_back(e.node);
    if (c.members.empty())
        for (const auto& e : ranked.entries)
            if (e.probability > 0)
                c.members.push_back(e.node);
    std::sort(c.members.begin(), c.members.end());
    return c;
}

/// |a ∩ b| / sqrt(|a| |b|), i.e. cosine similarity of indicator vectors.
inline double structural_similarity(std::span<const NodeId> a, std::span<const NodeId> b) {
    if (a.empty() || b.empty())
        throw std::invalid_argument("structural similarity needs non-empty sets");
    std::set<NodeId> sa(a.begin(), a.end());
    std::set<NodeId> sb(b.begin(), b.end());
    std::size_t common = 0;
    for (NodeId v : sa)
        common += sb.count(v);
    return static_cast<double>(common) /
           std::sqrt(static_cast<double>(sa.size()) * static_cast<double>(sb.size()));
}

/// Per-community record kept when tracing a detection run.
struct DetectionTrace {
    NodeId seed;
    int steps;
    bool all_zero;
    bool seed_repaired;
    std::vector<SweepPoint> sweep;
};

namespace detail {

inline double set_conductance(const Graph& g, std::span<const NodeId> members) {
    ConductanceSweep sw(g);
    for (NodeId v : members)
        sw.add(v);
    const auto& st = sw.state();
    return st.denominator() == 0 ? 0.0 : st.conductance();
}

inline void run_driver(const Graph& g, const WalkConfig& cfg, std::vector<Community>& out,
                             std::vector<DetectionTrace>* trace) {
    const std::size_t n = g.node_count();
    if (n == 0)
        return;
    std::vector<NodeId> by_degree(n);
    std::iota(by_degree.begin(), by_degree.end(), NodeId{0});
    std::stable_sort(by_degree.begin(), by_degree.end(),
                     [&](NodeId a, NodeId b) { return g.degree(a) > g.degree(b); });

    std::vector<bool> assigned(n, false);
    std::size_t cursor = 0;
    while (true) {
        while (cursor < n && assigned[by_degree[cursor]])
            ++cursor;
        if (cursor == n)
            break;
        const NodeId s = by_degree[cursor];
        if (g.degree(s) == 0) {
            assigned[s] = true;
            out.push_back(Community{{s}, std::numeric_limits<double>::quiet_NaN(), s});
            if (trace)
                trace->push_back({s, 0, false, false, {}});
            continue;
        }
        auto ranked = unfold_community(g, s, cfg);
        auto ex = extract_with_sweep(g, ranked);
        bool repaired = false;
        if (!ex.community.contains(s)) {
            auto& m = ex.community.members;
            m.insert(std::upper_bound(m.begin(), m.end(), s), s);
            ex.community.conductance = set_conductance(g, m);
            repaired = true;
        }
        for (NodeId v : ex.community.members)
            assigned[v] = true;
        if (trace)
            trace->push_back({s, ranked.steps, ranked.all_zero, repaired, std::move(ex.sweep)});
        out.push_back(std::move(ex.community));
    }
}

} // namespace detail

/**
 * Repeatedly seeds from the highest-degree unassigned node (lowest id on
 * ties), unfolds and extracts its community, until every node is assigned.
 * The null model uses the degree total of the whole graph, so on a
 * disconnected input a walk never leaves its component and a whole
 * component can come out as one zero-conductance community. Degree-0 nodes
 * become singletons.
 */
inline Cover detect_cover(const Graph& g, const WalkConfig& cfg = {}, std::vector<DetectionTrace>* trace = nullptr) {
    Cover cover(g.node_count());
    std::vector<Community> found;
    detail::run_driver(g, cfg, found, trace);
    for (auto& c : found)
        cover.add(std::move(c));
    return cover;
}

} // namespace ueoc
