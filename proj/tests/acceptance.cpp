// Acceptance gate: one PASS/FAIL line per criterion, nonzero exit if any fails.

#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <sstream>

#include <ueoc/bench.hpp>
#include <ueoc/detect.hpp>
#include <ueoc/metrics.hpp>
#include <ueoc/spectral.hpp>

#include "test_support.hpp"

namespace {

using namespace ueoc;
using namespace ueoc::testing;
using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

struct Verdict {
    bool pass;
    std::string detail;
};

std::string fmt(double x, int precision = 4) {
    std::ostringstream s;
    s.setf(std::ios::fixed);
    s.precision(precision);
    s << x;
    return s.str();
}

std::string sci(double x) {
    std::ostringstream s;
    s.precision(2);
    s << std::scientific << x;
    return s.str();
}

const std::vector<std::string> real_networks{"karate", "dolphin", "polbooks", "football"};

NodeId max_degree_node(const Graph& g) {
    NodeId best = 0;
    for (NodeId v = 1; v < g.node_count(); ++v)
        if (g.degree(v) > g.degree(best))
            best = v;
    return best;
}

Verdict spectral_fixtures() {
    const std::map<std::string, double> expected{
        {"karate", 7.5602}, {"dolphin", 25.4027}, {"polbooks", 26.4520}, {"football", 7.3097}};
    const double tol = 0.01, time_limit = 1.0;
    bool pass = true;
    std::string detail;
    for (const auto& name : real_networks) {
        auto net = load_dataset(name);
        if (!net) {
            pass = false;
            detail += name + " missing; ";
            continue;
        }
        const auto t0 = Clock::now();
        const double got = 1.0 / laplacian_spectrum(net->graph).lambda(2);
        const double secs = seconds_since(t0);
        const bool ok = std::abs(got - expected.at(name)) <= tol && secs < time_limit;
        pass = pass && ok;
        detail += name + " " + fmt(got) + " vs " + fmt(expected.at(name)) + " (" + fmt(secs, 3) + " s)" +
                  (ok ? "" : " OUT") + "; ";
    }
    return {pass, detail};
}

Verdict annealed_identity() {
    Rng rng(2024);
    double worst = 0;
    for (int rep = 0; rep < 20; ++rep) {
        auto g = random_connected(2 + rng.below(199), 0.03, rng);
        for (int k = 0; k < 5; ++k) {
            std::vector<double> v(g.node_count());
            double s = 0;
            for (auto& x : v)
                s += x = rng.uniform();
            for (auto& x : v)
                x /= s;
            auto pv = ProbabilityVector::from_dense(v);
            for (NodeId i = 0; i < g.node_count(); ++i)
                worst = std::max(worst, std::abs(annealed_term(g, pv, i) - literal_annealed_term(g, v, i)));
        }
    }
    return {worst <= 1e-12, "max deviation " + sci(worst) + " (limit 1e-12)"};
}

Verdict oracle_equivalence() {
    Rng rng(31337);
    std::vector<Graph> graphs;
    for (int rep = 0; rep < 50; ++rep)
        graphs.push_back(random_connected(2 + rng.below(63), 0.02 + 0.2 * rng.uniform(), rng));
    graphs.push_back(karate().graph);
    double worst = 0;
    std::size_t compared = 0;
    for (const auto& g : graphs)
        for (auto mode : {WalkMode::unconstrained, WalkMode::constrained, WalkMode::constrained_degree_corrected})
            for (int l : {1, 5, 20}) {
                auto dense = dense_transition_matrix(g, mode, l);
                WalkConfig cfg{l, 1e-12, mode};
                for (NodeId s = 0; s < g.node_count(); ++s) {
                    auto res = run_walk(g, s, cfg);
                    for (NodeId i = 0; i < g.node_count(); ++i) {
                        worst = std::max(worst, std::abs(res.vector[i] - dense(s, i)));
                        ++compared;
                    }
                }
            }
    return {worst <= 1e-12, std::to_string(compared) + " entries, max deviation " + sci(worst) + " (limit 1e-12)"};
}

Verdict gn_recovery() {
    const auto t0 = Clock::now();
    std::vector<double> mean(9, 0.0);
    for (int z = 0; z <= 8; ++z)
        for (std::uint64_t seed = 0; seed < 10; ++seed) {
            GNParams p;
            p.z_out = z;
            p.rng_seed = 1000 + seed;
            auto b = generate_gn(p);
            mean[static_cast<std::size_t>(z)] += overlapping_nmi(detect_cover(b.network.graph), b.truth, 128) / 10;
        }
    const double secs = seconds_since(t0);
    bool pass = std::abs(mean[0] - 1.0) <= 1e-12 && secs < 120;
    std::string detail = "mean NMI z_out=0..8:";
    for (std::size_t z = 0; z < mean.size(); ++z) {
        detail += " " + fmt(mean[z], 3);
        if (z <= 5)
            pass = pass && mean[z] >= 0.90;
        if (z > 0)
            pass = pass && mean[z] <= mean[z - 1] + 1e-12;
    }
    return {pass, detail + " (" + fmt(secs, 1) + " s)"};
}

Verdict table_regression() {
    struct Row {
        std::string name;
        double ac, eq;
    };
    const std::vector<Row> rows{
        {"karate", 0.5206, 0.2648}, {"dolphin", 0.3470, 0.3846}, {"football", 0.2823, 0.5996}, {"polbooks", 0.2749, 0.4155}};
    const double tol = 0.08;
    const auto t0 = Clock::now();
    bool pass = true;
    std::string detail;
    for (const auto& r : rows) {
        auto net = load_dataset(r.name);
        if (!net) {
            pass = false;
            detail += r.name + " missing; ";
            continue;
        }
        auto s = score_cover(net->graph, detect_cover(net->graph));
        const bool ok = std::abs(s.ac - r.ac) <= tol && std::abs(s.eq - r.eq) <= tol;
        pass = pass && ok;
        detail += r.name + " AC " + fmt(s.ac) + " vs " + fmt(r.ac) + ", EQ " + fmt(s.eq) + " vs " + fmt(r.eq) +
                  (ok ? "" : " OUT") + "; ";
    }
    const double secs = seconds_since(t0);
    pass = pass && secs < 30;
    return {pass, detail + "(" + fmt(secs, 2) + " s)"};
}

Verdict convergence_claim() {
    bool pass = true;
    std::string detail;
    for (const auto& name : real_networks) {
        auto net = load_dataset(name);
        if (!net) {
            pass = false;
            detail += name + " missing; ";
            continue;
        }
        const auto& g = net->graph;
        auto trace = convergence_trace(g, max_degree_node(g), WalkConfig{40, 1e-12, WalkMode::constrained_degree_corrected});
        std::size_t moved = 0;
        for (const auto& p : trace)
            if (p.l > 20)
                moved = std::max(moved, p.rank_delta);
        const bool same = detect_cover(g, WalkConfig{20}).same_sets(detect_cover(g, WalkConfig{40}));
        const bool ok = moved == 0 && same;
        pass = pass && ok;
        detail += name + " max rank_delta l=21..40 " + std::to_string(moved) + ", covers l=20/40 " +
                  (same ? "equal" : "differ") + (ok ? "" : " OUT") + "; ";
    }
    return {pass, detail};
}

Verdict incremental_sweep() {
    Rng rng(77);
    std::size_t checked = 0, mismatches = 0;
    while (checked < 1000) {
        auto g = random_connected(3 + rng.below(80), 0.02 + 0.1 * rng.uniform(), rng);
        std::vector<NodeId> order(g.node_count());
        std::iota(order.begin(), order.end(), NodeId{0});
        for (std::size_t i = order.size(); i > 1; --i)
            std::swap(order[i - 1], order[rng.below(i)]);
        const std::size_t len = 1 + rng.below(order.size());
        ConductanceSweep sweep(g);
        std::vector<NodeId> prefix;
        for (std::size_t k = 0; k < len && checked < 1000; ++k, ++checked) {
            const auto& st = sweep.add(order[k]);
            prefix.push_back(order[k]);
            auto [cut, vol] = naive_cut(g, prefix);
            mismatches += st.boundary != cut || st.volume != vol ? 1 : 0;
        }
    }
    return {mismatches == 0, std::to_string(checked) + " prefixes, " + std::to_string(mismatches) + " mismatches"};
}

Verdict overlap_discovery() {
    auto cover = detect_cover(cliques_sharing_node());
    bool toy = cover.size() == 2;
    std::string detail = "two cliques sharing node 3: " + std::to_string(cover.size()) + " communities";
    if (toy) {
        std::vector<NodeId> common;
        std::set_intersection(cover[0].members.begin(), cover[0].members.end(), cover[1].members.begin(),
                              cover[1].members.end(), std::back_inserter(common));
        toy = common == std::vector<NodeId>{3};
    }
    detail += toy ? " sharing exactly {3}" : " (need 2 sharing exactly {3})";

    double mean = 0;
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        LFRStyleParams p;
        p.mu = 0.1;
        p.overlap_count = 100;
        p.c_min = 20;
        p.rng_seed = 500 + seed;
        auto b = generate_overlapping(p);
        mean += overlapping_nmi(detect_cover(b.network.graph), b.truth, p.n) / 10;
    }
    const bool bench = mean >= 0.75;
    detail += "; overlapping benchmark mean NMI " + fmt(mean, 3) + " (floor 0.75)";
    return {toy && bench, detail};
}

Verdict metric_reductions() {
    Rng rng(4242);
    double worst_q = 0, worst_self = 0, worst_sym = 0;
    for (int rep = 0; rep < 10; ++rep) {
        auto g = random_connected(10 + rng.below(120), 0.05, rng);
        const std::size_t k = 2 + rng.below(6);
        std::vector<std::size_t> label(g.node_count());
        for (auto& l : label)
            l = rng.below(k);
        worst_q = std::max(worst_q, std::abs(extended_modularity(g, Cover::from_partition(label)) -
                                             standard_modularity(g, label)));
    }
    auto random_cover = [&](std::size_t n) {
        const std::size_t k = 1 + rng.below(6);
        std::vector<std::vector<NodeId>> sets(k);
        for (NodeId v = 0; v < n; ++v) {
            sets[rng.below(k)].push_back(v);
            if (rng.uniform() < 0.2)
                sets[rng.below(k)].push_back(v);
        }
        std::erase_if(sets, [](const auto& s) { return s.empty(); });
        return cover_of(n, sets);
    };
    for (int rep = 0; rep < 20; ++rep) {
        const std::size_t n = 10 + rng.below(90);
        auto x = random_cover(n), y = random_cover(n);
        worst_self = std::max(worst_self, std::abs(overlapping_nmi(x, x, n) - 1.0));
        worst_sym = std::max(worst_sym, std::abs(overlapping_nmi(x, y, n) - overlapping_nmi(y, x, n)));
    }
    const bool pass = worst_q <= 1e-12 && worst_self <= 1e-12 && worst_sym <= 1e-12;
    return {pass, "modularity " + sci(worst_q) + ", NMI(x,x)-1 " + sci(worst_self) + ", asymmetry " + sci(worst_sym) +
                      " (limit 1e-12)"};
}

Verdict scaling_property() {
    // Mean over three graphs per size of the median of three timed runs.
    std::vector<double> xs, ys;
    std::string detail = "sqrt(s):";
    for (std::size_t a : {25u, 50u, 75u, 100u}) {
        double mean_secs = 0;
        std::size_t n = 0;
        for (std::uint64_t seed = 0; seed < 3; ++seed) {
            GNParams p;
            p.groups = 40;
            p.group_size = a;
            p.z_out = 6;
            p.rng_seed = 9 + seed;
            auto g = generate_gn(p).network.graph;
            n = g.node_count();
            std::vector<double> times;
            for (int r = 0; r < 3; ++r) {
                const auto t0 = Clock::now();
                auto cover = detect_cover(g);
                times.push_back(seconds_since(t0));
                if (cover.empty())
                    return {false, "empty cover"};
            }
            std::sort(times.begin(), times.end());
            mean_secs += times[1] / 3;
        }
        xs.push_back(static_cast<double>(n));
        ys.push_back(std::sqrt(mean_secs));
        detail += " n=" + std::to_string(n) + " " + fmt(ys.back(), 3);
    }
    const double k = static_cast<double>(xs.size());
    const double mx = std::accumulate(xs.begin(), xs.end(), 0.0) / k;
    const double my = std::accumulate(ys.begin(), ys.end(), 0.0) / k;
    double sxy = 0, sxx = 0, syy = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        sxy += (xs[i] - mx) * (ys[i] - my);
        sxx += (xs[i] - mx) * (xs[i] - mx);
        syy += (ys[i] - my) * (ys[i] - my);
    }
    const double r2 = sxy * sxy / (sxx * syy);
    return {r2 >= 0.95, detail + "; R^2 " + fmt(r2) + " (floor 0.95)"};
}

} // namespace

int main() {
    const std::vector<std::pair<std::string, std::function<Verdict()>>> criteria{
        {"spectral gap on real networks", spectral_fixtures},
        {"annealed term closed form", annealed_identity},
        {"sparse walk vs dense oracle", oracle_equivalence},
        {"planted partition recovery", gn_recovery},
        {"real network AC/EQ regression", table_regression},
        {"ranking settles by 20 steps", convergence_claim},
        {"incremental sweep exactness", incremental_sweep},
        {"overlap discovery", overlap_discovery},
        {"metric reductions", metric_reductions},
        {"runtime scaling shape", scaling_property},
    };
    int failed = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        Verdict v;
        try {
            v = criteria[i].second();
        } catch (const std::exception& e) {
            v = {false, std::string("threw: ") + e.what()};
        }
        failed += v.pass ? 0 : 1;
        std::cout << (v.pass ? "PASS" : "FAIL") << " " << i + 1 << " " << criteria[i].first << ": " << v.detail
                  << std::endl;
    }
    std::cout << criteria.size() - static_cast<std::size_t>(failed) << "/" << criteria.size() << " criteria passed"
              << std::endl;
    return failed == 0 ? 0 : 1;
}
