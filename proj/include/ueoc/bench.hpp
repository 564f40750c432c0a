/*
 * bench.hpp
 *
 * Seedable generators for planted-partition (four-group style) benchmarks
 * and for LFR-style benchmarks with power-law degrees, power-law community
 * sizes and a controlled number of overlapping nodes.
 */

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <limits>
#include <numeric>
#include <random>
#include <stdexcept>
#include <string>
#include <unordered_set>
#include <vector>

#include "cover.hpp"
#include "graph.hpp"

namespace ueoc {

class GenerationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct Benchmark {
    Network network;
    Cover truth;
};

/// Deterministic random stream; the draws below do not depend on the
/// standard library's distribution implementations.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    /// Uniform integer in [0, bound).
    std::uint64_t below(std::uint64_t bound) {
        const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                                    std::numeric_limits<std::uint64_t>::max() % bound;
        std::uint64_t x;
        do {
            x = engine_();
        } while (x >= limit);
        return x % bound;
    }

    template <class T>
    void shuffle(std::vector<T>& v) {
        for (std::size_t i = v.size(); i > 1; --i)
            std::swap(v[i - 1], v[below(i)]);
    }

private:
    std::mt19937_64 engine_;
};

namespace detail {

inline std::vector<std::string> numeric_labels(std::size_t n) {
    std::vector<std::string> labels(n);
    for (std::size_t i = 0; i < n; ++i)
        labels[i] = std::to_string(i);
    return labels;
}

/// Maps a cover over generator ids onto the network's internal ids, dropping
/// nodes that were stripped as isolated.
inline Cover map_truth(const Network& net, const std::vector<std::vector<NodeId>>& groups) {
    Cover truth(net.graph.node_count());
    for (const auto& gr : groups) {
        std::vector<NodeId> members;
        for (NodeId v : gr) {
            auto id = net.find(std::to_string(v));
            if (id >= 0)
                members.push_back(static_cast<NodeId>(id));
        }
        if (!members.empty())
            truth.add(std::move(members));
    }
    return truth;
}

} // namespace detail

struct GNParams {
    std::size_t groups = 4;
    std::size_t group_size = 32;
    double expected_degree = 16;
    double z_out = 0;
    std::uint64_t rng_seed = 0;

    double z_in() const { return expected_degree - z_out; }
    double p_in() const { return z_in() / static_cast<double>(group_size - 1); }
    double p_out() const {
        return groups < 2 ? 0.0 : z_out / static_cast<double>((groups - 1) * group_size);
    }

    void validate() const {
        if (groups < 1 || group_size < 2)
            throw GenerationError("need at least one group of two or more nodes");
        if (z_out < 0 || z_out > expected_degree)
            throw GenerationError("z_out must lie in [0, expected_degree]");
        if (p_in() > 1.0 || p_out() > 1.0)
            throw GenerationError("derived link probabilities exceed 1");
    }
};

/// Every intra-group pair is linked with probability p_in, every inter-group
/// pair with p_out. The ground truth is the group partition.
inline Benchmark generate_gn(const GNParams& p) {
    p.validate();
    const std::size_t n = p.groups * p.group_size;
    Rng rng(p.rng_seed);
    const double pin = p.p_in(), pout = p.p_out();
    std::vector<Edge> edges;
    for (NodeId i = 0; i < n; ++i)
        for (NodeId j = i + 1; j < n; ++j) {
            const bool same = i / p.group_size == j / p.group_size;
            if (rng.uniform() < (same ? pin : pout))
                edges.emplace_back(i, j);
        }
    std::vector<std::vector<NodeId>> groups(p.groups);
    for (NodeId i = 0; i < n; ++i)
        groups[i / p.group_size].push_back(i);

    Benchmark b{Network::build(detail::numeric_labels(n), edges), {}};
    b.truth = detail::map_truth(b.network, groups);
    return b;
}

struct LFRStyleParams {
    std::size_t n = 1000;
    double avg_degree = 20;
    double max_degree = 0;      // 0 selects 2.5 * avg_degree
    std::size_t c_min = 20;
    std::size_t c_max = 0;      // 0 selects 5 * c_min
    double mu = 0.1;
    std::size_t overlap_count = 0;
    std::size_t memberships = 2;
    double tau1 = -2;
    double tau2 = -1;
    std::uint64_t rng_seed = 0;
    int retry_sweeps = 100;
    int max_attempts = 20; // fresh draws when an instance cannot be wired

    double d_max() const { return max_degree > 0 ? max_degree : 2.5 * avg_degree; }
    std::size_t cmax() const { return c_max > 0 ? c_max : 5 * c_min; }

    void validate() const {
        if (n < 2 || c_min < 2)
            throw GenerationError("need n >= 2 and c_min >= 2");
        if (c_min > cmax() || cmax() > n)
            throw GenerationError("community sizes must satisfy c_min <= c_max <= n");
        if (mu < 0 || mu >= 1)
            throw GenerationError("mixing parameter must lie in [0, 1)");
        if (overlap_count > n)
            throw GenerationError("overlap count exceeds n");
        if (memberships < 2)
            throw GenerationError("overlapping nodes need at least two memberships");
        if (avg_degree < 1 || avg_degree > d_max() || d_max() > static_cast<double>(n - 1))
            throw GenerationError("degree parameters out of range");
        if (retry_sweeps < 0 || max_attempts < 1)
            throw GenerationError("retry budget must be non-negative with at least one attempt");
    }
};

namespace detail {

/// Discrete power law P(k) ∝ k^exponent on [lo, hi], sampled by inverse CDF.
class DiscretePowerLaw {
public:
    DiscretePowerLaw(std::size_t lo, std::size_t hi, double exponent) : lo_(lo) {
        double acc = 0;
        for (std::size_t k = lo; k <= hi; ++k) {
            acc += std::pow(static_cast<double>(k), exponent);
            cdf_.push_back(acc);
        }
        for (auto& c : cdf_)
            c /= acc;
    }

    std::size_t operator()(Rng& rng) const {
        const double u = rng.uniform();
        auto it = std::upper_bound(cdf_.begin(), cdf_.end(), u);
        if (it == cdf_.end())
            --it;
        return lo_ + static_cast<std::size_t>(it - cdf_.begin());
    }

private:
    std::size_t lo_;
    std::vector<double> cdf_;
};

inline std::uint64_t edge_key(NodeId u, NodeId v) {
    if (u > v)
        std::swap(u, v);
    return (static_cast<std::uint64_t>(u) << 32) | v;
}

/**
 * Configuration-model matching of `stubs` (one entry per stub), rejecting
 * pairs for which `ok` fails or that already exist in `present`. Rejected
 * stubs are reshuffled each sweep; a stuck pair is also tried against a
 * random accepted edge by swapping endpoints.
 */
template <class Ok>
void match_stubs(std::vector<NodeId> stubs, Ok ok, std::unordered_set<std::uint64_t>& present,
                 std::vector<Edge>& edges, Rng& rng, int sweeps, const char* what) {
    if (stubs.size() % 2 != 0)
        throw GenerationError(std::string("odd stub count in ") + what);
    const std::size_t first_edge = edges.size();
    auto valid = [&](NodeId a, NodeId b) { return a != b && !present.count(edge_key(a, b)) && ok(a, b); };
    auto accept = [&](NodeId a, NodeId b) {
        present.insert(edge_key(a, b));
        edges.emplace_back(a, b);
    };
    for (int sweep = 0; sweep <= sweeps && !stubs.empty(); ++sweep) {
        rng.shuffle(stubs);
        std::vector<NodeId> rest;
        for (std::size_t i = 0; i + 1 < stubs.size(); i += 2) {
            const NodeId a = stubs[i], b = stubs[i + 1];
            if (valid(a, b)) {
                accept(a, b);
                continue;
            }
            bool fixed = false;
            const std::size_t pool = edges.size() - first_edge;
            const std::size_t offset = pool > 0 ? rng.below(pool) : 0;
            for (std::size_t attempt = 0; attempt < pool && !fixed; ++attempt) {
                const std::size_t e = first_edge + (offset + attempt) % pool;
                auto [x, y] = edges[e];
                if (rng.below(2))
                    std::swap(x, y);
                // replace (x, y) by (a, x) and (b, y)
                present.erase(edge_key(x, y));
                if (valid(a, x) && valid(b, y) && edge_key(a, x) != edge_key(b, y)) {
                    edges[e] = {a, x};
                    present.insert(edge_key(a, x));
                    accept(b, y);
                    fixed = true;
                } else {
                    present.insert(edge_key(x, y));
                }
            }
            if (!fixed) {
                rest.push_back(a);
                rest.push_back(b);
            }
        }
        stubs = std::move(rest);
    }
    if (!stubs.empty())
        throw GenerationError(std::string("stub matching for ") + what + " left " + std::to_string(stubs.size()) +
                              " stubs unmatched after " + std::to_string(sweeps) + " sweeps");
}

/**
 * Havel-Hakimi construction: repeatedly joins the node with the largest
 * remaining degree to the next-largest ones it is not yet linked to.
 */
inline void havel_hakimi(const std::vector<NodeId>& nodes, const std::vector<std::size_t>& degree,
                         std::unordered_set<std::uint64_t>& present, std::vector<Edge>& edges, const char* what) {
    std::vector<std::pair<std::size_t, NodeId>> left;
    for (std::size_t i = 0; i < nodes.size(); ++i)
        if (degree[i] > 0)
            left.emplace_back(degree[i], nodes[i]);
    while (!left.empty()) {
        std::sort(left.begin(), left.end(), [](const auto& a, const auto& b) {
            return a.first != b.first ? a.first > b.first : a.second < b.second;
        });
        auto [need, u] = left.front();
        left.erase(left.begin());
        for (auto& [d, v] : left) {
            if (need == 0)
                break;
            if (d == 0 || present.count(edge_key(u, v)))
                continue;
            present.insert(edge_key(u, v));
            edges.emplace_back(u, v);
            --d;
            --need;
        }
        if (need > 0)
            throw GenerationError(std::string("degree sequence of ") + what + " is not realizable");
        std::erase_if(left, [](const auto& e) { return e.first == 0; });
    }
}

/// Degree-preserving double-edge swaps on edges[first..), keeping the graph simple.
inline void shuffle_edges(std::vector<Edge>& edges, std::size_t first, std::unordered_set<std::uint64_t>& present,
                          Rng& rng, std::size_t swaps) {
    const std::size_t m = edges.size() - first;
    if (m < 2)
        return;
    for (std::size_t t = 0; t < swaps; ++t) {
        auto& e1 = edges[first + rng.below(m)];
        auto& e2 = edges[first + rng.below(m)];
        auto [a, b] = e1;
        auto [c, d] = e2;
        if (rng.below(2))
            std::swap(c, d);
        if (a == c || a == d || b == c || b == d)
            continue;
        if (present.count(edge_key(a, d)) || present.count(edge_key(c, b)))
            continue;
        present.erase(edge_key(a, b));
        present.erase(edge_key(c, d));
        e1 = {a, d};
        e2 = {c, b};
        present.insert(edge_key(a, d));
        present.insert(edge_key(c, b));
    }
}

/// Degrees from the power law on [ceil(d/4), d_max], scaled so the mean is d.
inline std::vector<std::size_t> sample_degrees(const LFRStyleParams& p, Rng& rng) {
    const auto lo = static_cast<std::size_t>(std::ceil(p.avg_degree / 4));
    const auto hi = static_cast<std::size_t>(std::floor(p.d_max()));
    DiscretePowerLaw law(lo, hi, p.tau1);
    std::vector<double> raw(p.n);
    for (auto& x : raw)
        x = static_cast<double>(law(rng));
    auto scaled = [&](double f) {
        std::vector<std::size_t> k(p.n);
        for (std::size_t i = 0; i < p.n; ++i)
            k[i] = static_cast<std::size_t>(std::clamp(std::round(raw[i] * f), 1.0, static_cast<double>(hi)));
        return k;
    };
    auto mean = [&](const std::vector<std::size_t>& k) {
        return static_cast<double>(std::accumulate(k.begin(), k.end(), std::size_t{0})) / static_cast<double>(p.n);
    };
    double a = 0.05, b = 50.0;
    for (int it = 0; it < 100; ++it) {
        const double mid = 0.5 * (a + b);
        (mean(scaled(mid)) < p.avg_degree ? a : b) = mid;
    }
    return scaled(0.5 * (a + b));
}

/// Community sizes drawn until they hold every membership, then trimmed.
inline std::vector<std::size_t> sample_sizes(const LFRStyleParams& p, std::size_t total, Rng& rng) {
    DiscretePowerLaw law(p.c_min, p.cmax(), p.tau2);
    std::vector<std::size_t> sizes;
    std::size_t sum = 0;
    while (sum < total || sizes.size() < p.memberships) {
        sizes.push_back(law(rng));
        sum += sizes.back();
    }
    std::size_t excess = sum - total;
    // trim the last community first, then the largest ones, never below c_min
    for (std::size_t guard = 0; excess > 0 && guard < 10 * total; ++guard) {
        std::size_t idx = sizes.size() - 1;
        if (sizes[idx] <= p.c_min)
            idx = static_cast<std::size_t>(std::max_element(sizes.begin(), sizes.end()) - sizes.begin());
        if (sizes[idx] <= p.c_min)
            break;
        const std::size_t cut = std::min(excess, sizes[idx] - p.c_min);
        sizes[idx] -= cut;
        excess -= cut;
    }
    if (excess > 0)
        throw GenerationError("cannot trim community sizes to the membership total");
    return sizes;
}

} // namespace detail

namespace detail {

/**
 * One LFR-style draw. Each node splits its degree into an external part
 * round(mu k) and an internal part shared equally among its communities;
 * both parts are wired by stub matching.
 */
inline Benchmark generate_overlapping_once(const LFRStyleParams& p, Rng& rng) {
    const std::size_t n = p.n;

    auto degree = detail::sample_degrees(p, rng);

    std::vector<NodeId> ids(n);
    std::iota(ids.begin(), ids.end(), NodeId{0});
    rng.shuffle(ids);
    std::vector<std::size_t> member_count(n, 1);
    for (std::size_t i = 0; i < p.overlap_count; ++i)
        member_count[ids[i]] = p.memberships;
    const std::size_t total = n + p.overlap_count * (p.memberships - 1);

    auto sizes = detail::sample_sizes(p, total, rng);
    const std::size_t k = sizes.size();
    if (std::accumulate(sizes.begin(), sizes.end(), std::size_t{0}) < total)
        throw GenerationError("community sizes cannot hold all memberships");

    std::vector<std::size_t> external(n), internal(n);
    for (NodeId i = 0; i < n; ++i) {
        external[i] = static_cast<std::size_t>(std::round(p.mu * static_cast<double>(degree[i])));
        internal[i] = degree[i] - external[i];
    }

    // Assign memberships, most demanding nodes first.
    std::vector<std::vector<NodeId>> groups(k);
    std::vector<std::vector<std::size_t>> node_groups(n);
    std::vector<std::size_t> capacity = sizes;
    std::vector<NodeId> order(n);
    std::iota(order.begin(), order.end(), NodeId{0});
    rng.shuffle(order);
    auto share = [&](NodeId v) { return (internal[v] + member_count[v] - 1) / member_count[v]; };
    std::stable_sort(order.begin(), order.end(), [&](NodeId a, NodeId b) { return share(a) > share(b); });

    auto contains = [&](NodeId v, std::size_t c) {
        return std::find(node_groups[v].begin(), node_groups[v].end(), c) != node_groups[v].end();
    };
    auto pick = [&](NodeId v, bool need_room) -> std::int64_t {
        std::size_t weight = 0;
        for (std::size_t c = 0; c < k; ++c)
            if (capacity[c] > 0 && !contains(v, c) && (!need_room || sizes[c] > share(v)))
                weight += capacity[c];
        if (weight == 0)
            return -1;
        std::size_t r = rng.below(weight);
        for (std::size_t c = 0; c < k; ++c)
            if (capacity[c] > 0 && !contains(v, c) && (!need_room || sizes[c] > share(v))) {
                if (r < capacity[c])
                    return static_cast<std::int64_t>(c);
                r -= capacity[c];
            }
        return -1;
    };
    for (NodeId v : order) {
        for (std::size_t slot = 0; slot < member_count[v]; ++slot) {
            auto c = pick(v, true);
            if (c < 0)
                c = pick(v, false);
            if (c < 0) {
                // Every community with room already holds v: move some member
                // u of a full community into the open one and take its place.
                std::size_t open = k;
                for (std::size_t j = 0; j < k; ++j)
                    if (capacity[j] > 0)
                        open = j;
                bool swapped = false;
                for (std::size_t tries = 0; tries < 64 * k && !swapped && open < k; ++tries) {
                    const std::size_t full = rng.below(k);
                    if (contains(v, full) || groups[full].empty())
                        continue;
                    const std::size_t pos = rng.below(groups[full].size());
                    const NodeId u = groups[full][pos];
                    if (contains(u, open))
                        continue;
                    groups[full][pos] = v;
                    std::replace(node_groups[u].begin(), node_groups[u].end(), full, open);
                    node_groups[v].push_back(full);
                    groups[open].push_back(u);
                    --capacity[open];
                    swapped = true;
                }
                if (!swapped)
                    throw GenerationError("could not place all community memberships");
                continue;
            }
            const auto cc = static_cast<std::size_t>(c);
            groups[cc].push_back(v);
            node_groups[v].push_back(cc);
            --capacity[cc];
        }
    }

    // Internal degree of each node inside each of its communities.
    std::vector<std::vector<std::size_t>> inner(k);
    for (std::size_t c = 0; c < k; ++c)
        inner[c].assign(groups[c].size(), 0);
    for (std::size_t c = 0; c < k; ++c)
        for (std::size_t pos = 0; pos < groups[c].size(); ++pos) {
            const NodeId v = groups[c][pos];
            const auto& mine = node_groups[v];
            const std::size_t idx = static_cast<std::size_t>(std::find(mine.begin(), mine.end(), c) - mine.begin());
            std::size_t part = internal[v] / mine.size() + (idx < internal[v] % mine.size() ? 1 : 0);
            inner[c][pos] = std::min(part, groups[c].size() - 1);
        }

    std::unordered_set<std::uint64_t> present;
    std::vector<Edge> edges;
    for (std::size_t c = 0; c < k; ++c) {
        auto& deg = inner[c];
        std::size_t sum = std::accumulate(deg.begin(), deg.end(), std::size_t{0});
        if (sum % 2 != 0) {
            // drop one stub from a random member that has one
            const std::size_t start = rng.below(deg.size());
            for (std::size_t t = 0; t < deg.size(); ++t) {
                auto& d = deg[(start + t) % deg.size()];
                if (d > 0) {
                    --d;
                    break;
                }
            }
        }
        std::vector<NodeId> stubs;
        for (std::size_t pos = 0; pos < groups[c].size(); ++pos)
            stubs.insert(stubs.end(), deg[pos], groups[c][pos]);
        const std::size_t before = edges.size();
        try {
            detail::match_stubs(std::move(stubs), [](NodeId, NodeId) { return true; }, present, edges, rng,
                                p.retry_sweeps, ("community " + std::to_string(c)).c_str());
        } catch (const GenerationError&) {
            // Dense degree sequences (members adjacent to nearly the whole
            // community) defeat random matching; build one realization
            // deterministically and randomize it with degree-preserving swaps.
            for (std::size_t e = before; e < edges.size(); ++e)
                present.erase(detail::edge_key(edges[e].first, edges[e].second));
            edges.resize(before);
            detail::havel_hakimi(groups[c], deg, present, edges, ("community " + std::to_string(c)).c_str());
            detail::shuffle_edges(edges, before, present, rng, 10 * (edges.size() - before));
        }
    }

    std::size_t ext_sum = std::accumulate(external.begin(), external.end(), std::size_t{0});
    if (ext_sum % 2 != 0) {
        const std::size_t start = rng.below(n);
        for (std::size_t t = 0; t < n; ++t)
            if (external[(start + t) % n] > 0) {
                --external[(start + t) % n];
                break;
            }
    }
    std::vector<NodeId> stubs;
    for (NodeId v = 0; v < n; ++v)
        stubs.insert(stubs.end(), external[v], v);
    auto disjoint = [&](NodeId a, NodeId b) {
        for (auto c : node_groups[a])
            if (std::find(node_groups[b].begin(), node_groups[b].end(), c) != node_groups[b].end())
                return false;
        return true;
    };
    detail::match_stubs(std::move(stubs), disjoint, present, edges, rng, p.retry_sweeps, "external links");

    for (auto& gr : groups)
        std::sort(gr.begin(), gr.end());
    Benchmark b{Network::build(detail::numeric_labels(n), edges), {}};
    b.truth = detail::map_truth(b.network, groups);
    return b;
}

} // namespace detail

/**
 * Draws LFR-style instances from one seeded stream until one can be wired
 * as a simple graph, up to max_attempts draws.
 */
inline Benchmark generate_overlapping(const LFRStyleParams& p) {
    p.validate();
    Rng rng(p.rng_seed);
    std::string last;
    for (int attempt = 0; attempt < p.max_attempts; ++attempt) {
        try {
            return detail::generate_overlapping_once(p, rng);
        } catch (const GenerationError& e) {
            last = e.what();
        }
    }
    throw GenerationError("no realizable instance in " + std::to_string(p.max_attempts) + " draws; last: " + last);
}

/// Writes `<prefix>.edges` and `<prefix>.cover`.
inline void write_benchmark(const Benchmark& b, const std::string& prefix) {
    std::ofstream edges(prefix + ".edges");
    std::ofstream cover(prefix + ".cover");
    if (!edges || !cover)
        throw std::runtime_error("cannot open output files for prefix '" + prefix + "'");
    write_edge_list(b.network, edges);
    write_cover(b.network, b.truth, cover);
    if (!edges || !cover)
        throw std::runtime_error("write failed for prefix '" + prefix + "'");
}

} // namespace ueoc
