/*
 * metrics.hpp
 *
 * Cover quality (conductance, average conductance, overlap-aware
 * modularity) and cover agreement (LFK overlapping NMI).
 */

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

#include "cover.hpp"
#include "detect.hpp"
#include "graph.hpp"

namespace ueoc {

class MetricError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Boundary edges over min(Vol(S), Vol(V \ S)). Errors on S = ∅ or S = V.
inline double conductance(const Graph& g, std::span<const NodeId> set) {
    std::vector<NodeId> s(set.begin(), set.end());
    std::sort(s.begin(), s.end());
    s.erase(std::unique(s.begin(), s.end()), s.end());
    if (s.empty() || s.size() >= g.node_count())
        throw MetricError("conductance is undefined for the empty set and the full node set");
    ConductanceSweep sw(g);
    for (NodeId v : s)
        sw.add(v);
    if (sw.state().denominator() == 0)
        throw MetricError("conductance denominator is zero");
    return sw.state().conductance();
}

struct CoverScore {
    double ac = 0;
    double eq = 0;
    std::vector<double> per_community_phi;
};

/// Mean conductance over the communities; a community spanning every node
/// scores 0.
inline double average_conductance(const Graph& g, const Cover& cover) {
    if (cover.empty())
        throw MetricError("cover has no communities");
    double total = 0;
    for (const auto& c : cover.communities())
        total += c.size() >= g.node_count() ? 0.0 : conductance(g, c.members);
    return total / static_cast<double>(cover.size());
}

/**
 * Overlap-aware modularity: (1/2m) sum_i sum_{v,w in C_i} [A_vw − d_v d_w / 2m]
 * / (O_v O_w), over ordered pairs including v = w. With every O_v = 1 this is
 * Newman–Girvan modularity.
 */
inline double extended_modularity(const Graph& g, const Cover& cover) {
    const std::size_t n = g.node_count();
    if (cover.node_count() != n)
        throw MetricError("cover and graph sizes differ");
    std::vector<double> inv_o(n);
    for (NodeId v = 0; v < n; ++v) {
        auto o = cover.memberships(v).size();
        if (o == 0)
            throw MetricError("node " + std::to_string(v) + " is not covered");
        inv_o[v] = 1.0 / static_cast<double>(o);
    }
    const double two_m = static_cast<double>(g.total_degree());
    std::vector<bool> inside(n, false);
    double q = 0;
    for (const auto& c : cover.communities()) {
        for (NodeId v : c.members)
            inside[v] = true;
        double links = 0;
        double weighted_degree = 0;
        for (NodeId v : c.members) {
            double row = 0;
            for (NodeId w : g.neighbors(v))
                if (inside[w])
                    row += inv_o[w];
            links += inv_o[v] * row;
            weighted_degree += static_cast<double>(g.degree(v)) * inv_o[v];
        }
        q += links - weighted_degree * weighted_degree / two_m;
        for (NodeId v : c.members)
            inside[v] = false;
    }
    return q / two_m;
}

inline CoverScore score_cover(const Graph& g, const Cover& cover) {
    CoverScore s;
    for (const auto& c : cover.communities())
        s.per_community_phi.push_back(c.size() >= g.node_count() ? 0.0 : conductance(g, c.members));
    double total = 0;
    for (double phi : s.per_community_phi)
        total += phi;
    s.ac = cover.empty() ? 0.0 : total / static_cast<double>(cover.size());
    s.eq = extended_modularity(g, cover);
    return s;
}

namespace detail {

inline double plogp(std::int64_t count, std::int64_t n) {
    if (count == 0)
        return 0.0;
    const double p = static_cast<double>(count) / static_cast<double>(n);
    return -p * std::log2(p);
}

/**
 * Mean over communities of x of H(X_k | Y) / H(X_k), where the best-matching
 * y community is taken over those passing the LFK positivity test.
 */
inline double normalized_conditional_entropy(const Cover& x, const Cover& y, std::int64_t n) {
    std::vector<std::int64_t> y_sizes;
    for (const auto& c : y.communities())
        y_sizes.push_back(static_cast<std::int64_t>(c.size()));

    double total = 0;
    std::vector<std::int64_t> overlap(y.size());
    for (const auto& xk : x.communities()) {
        const auto a = static_cast<std::int64_t>(xk.size());
        const double hx = plogp(a, n) + plogp(n - a, n);
        if (hx == 0)
            continue; // X_k is constant; its conditional entropy is zero as well
        std::fill(overlap.begin(), overlap.end(), 0);
        for (NodeId v : xk.members)
            for (auto j : y.memberships(v))
                ++overlap[j];
        double best = hx;
        for (std::size_t j = 0; j < y.size(); ++j) {
            const std::int64_t n11 = overlap[j];
            const std::int64_t n10 = a - n11;
            const std::int64_t n01 = y_sizes[j] - n11;
            const std::int64_t n00 = n - n11 - n10 - n01;
            const double h11 = plogp(n11, n), h10 = plogp(n10, n);
            const double h01 = plogp(n01, n), h00 = plogp(n00, n);
            if (h11 + h00 < h01 + h10)
                continue;
            const double hy = plogp(y_sizes[j], n) + plogp(n - y_sizes[j], n);
            best = std::min(best, h11 + h10 + h01 + h00 - hy);
        }
        total += best / hx;
    }
    return total / static_cast<double>(x.size());
}

} // namespace detail

/**
 * Overlapping normalized mutual information in the Lancichinetti–Fortunato–
 * Kertész form: 1 − ½ [H(X|Y)_norm + H(Y|X)_norm], base-2 entropies.
 */
inline double overlapping_nmi(const Cover& x, const Cover& y, std::size_t n) {
    if (x.empty() || y.empty())
        throw MetricError("overlapping NMI needs non-empty covers");
    if (x.node_count() != n || y.node_count() != n)
        throw MetricError("covers must range over the same n nodes");
    const auto nn = static_cast<std::int64_t>(n);
    const double hxy = detail::normalized_conditional_entropy(x, y, nn);
    const double hyx = detail::normalized_conditional_entropy(y, x, nn);
    return std::clamp(1.0 - 0.5 * (hxy + hyx), 0.0, 1.0);
}

} // namespace ueoc
