/*
 * spectral.hpp
 *
 * Spectrum of the random-walk Laplacian M = I − P and the local mixing times
 * derived from it, plus per-step convergence probes of the unfolding walk.
 */

#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

#include "detect.hpp"
#include "graph.hpp"
#include "walk.hpp"

namespace ueoc {

struct SpectrumReport {
    /// Ascending; complete for dense solves, the smallest few otherwise.
    std::vector<double> eigenvalues;
    std::size_t node_count = 0;
    bool complete = true;

    double lambda(std::size_t i) const { return eigenvalues.at(i - 1); } // 1-based

    /// Exit time 1/lambda_i of the i-th local mixing state for i >= 2 (index 0
    /// holds i = 2). The entering time of state i is the exit time of i + 1.
    std::vector<double> exit_times() const {
        std::vector<double> out;
        for (std::size_t i = 1; i < eigenvalues.size(); ++i)
            out.push_back(inverse(eigenvalues[i]));
        return out;
    }

    bool bipartite_like() const {
        return complete && !eigenvalues.empty() && eigenvalues.back() >= 2.0 - 1e-9;
    }

    static double inverse(double lambda) {
        return lambda > 0 ? 1.0 / lambda : std::numeric_limits<double>::infinity();
    }
};

struct SpectrumOptions {
    std::size_t dense_cap = 4096;
    std::size_t iterative_count = 64;
    bool allow_iterative = true;
    bool force_iterative = false;
};

namespace detail {

/// Symmetric normalized adjacency D^{-1/2} A D^{-1/2} applied to x.
inline void normalized_adjacency_apply(const Graph& g, const std::vector<double>& inv_sqrt_d,
                                       const Eigen::VectorXd& x, Eigen::VectorXd& y) {
    const auto n = static_cast<NodeId>(g.node_count());
    for (NodeId i = 0; i < n; ++i) {
        double acc = 0;
        for (NodeId j : g.neighbors(i))
            acc += inv_sqrt_d[j] * x[j];
        y[i] = inv_sqrt_d[i] * acc;
    }
}

/**
 * Largest `count` eigenvalues of the normalized adjacency by Lanczos with full
 * reorthogonalization. The Krylov basis is grown well past `count` so the
 * extreme Ritz values converge.
 */
inline std::vector<double> lanczos_top(const Graph& g, std::size_t count) {
    const std::size_t n = g.node_count();
    const std::size_t dim = std::min(n, std::max<std::size_t>(8 * count, 400));
    std::vector<double> inv_sqrt_d(n);
    for (NodeId i = 0; i < n; ++i)
        inv_sqrt_d[i] = 1.0 / std::sqrt(static_cast<double>(g.degree(i)));

    Eigen::MatrixXd V(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(dim));
    std::vector<double> alpha, beta;
    std::mt19937_64 rng(0x5eed);
    std::normal_distribution<double> normal;
    Eigen::VectorXd v(static_cast<Eigen::Index>(n));
    for (auto& x : v)
        x = normal(rng);
    v.normalize();
    Eigen::VectorXd w(static_cast<Eigen::Index>(n));

    std::size_t k = 0;
    for (; k < dim; ++k) {
        V.col(static_cast<Eigen::Index>(k)) = v;
        normalized_adjacency_apply(g, inv_sqrt_d, v, w);
        const double a = v.dot(w);
        alpha.push_back(a);
        // two passes of classical Gram-Schmidt against the whole basis
        for (int pass = 0; pass < 2; ++pass) {
            auto basis = V.leftCols(static_cast<Eigen::Index>(k + 1));
            w -= basis * (basis.transpose() * w);
        }
        const double b = w.norm();
        if (k + 1 == dim || b < 1e-12)
            break;
        beta.push_back(b);
        v = w / b;
    }
    const auto m = static_cast<Eigen::Index>(alpha.size());
    Eigen::MatrixXd T = Eigen::MatrixXd::Zero(m, m);
    for (Eigen::Index i = 0; i < m; ++i) {
        T(i, i) = alpha[static_cast<std::size_t>(i)];
        if (i + 1 < m) {
            T(i, i + 1) = beta[static_cast<std::size_t>(i)];
            T(i + 1, i) = beta[static_cast<std::size_t>(i)];
        }
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(T, Eigen::EigenvaluesOnly);
    std::vector<double> ritz(es.eigenvalues().data(), es.eigenvalues().data() + m);
    std::sort(ritz.rbegin(), ritz.rend());
    ritz.resize(std::min<std::size_t>(count, ritz.size()));
    return ritz;
}

inline Eigen::MatrixXd normalized_laplacian_dense(const Graph& g) {
    const auto n = static_cast<Eigen::Index>(g.node_count());
    Eigen::MatrixXd L = Eigen::MatrixXd::Identity(n, n);
    for (auto [u, v] : g.edges()) {
        const double w = 1.0 / std::sqrt(static_cast<double>(g.degree(u)) * static_cast<double>(g.degree(v)));
        L(u, v) = -w;
        L(v, u) = -w;
    }
    return L;
}

} // namespace detail

/**
 * Eigenvalues of M = I − P. M is similar to the symmetric
 * I − D^{-1/2} A D^{-1/2} through D^{1/2}, so the symmetric problem is solved.
 * Up to dense_cap nodes all eigenvalues are returned; above it only the
 * smallest iterative_count, by Lanczos.
 */
inline SpectrumReport laplacian_spectrum(const Graph& g, const SpectrumOptions& opt = {}) {
    SpectrumReport rep;
    rep.node_count = g.node_count();
    if (g.node_count() == 0)
        throw GraphError("empty graph");
    const bool iterative = opt.force_iterative || g.node_count() > opt.dense_cap;
    if (iterative) {
        if (!opt.allow_iterative)
            throw GraphError("graph exceeds the dense eigensolver cap and iterative mode is disabled");
        auto top = detail::lanczos_top(g, std::min(opt.iterative_count, g.node_count()));
        for (double mu : top)
            rep.eigenvalues.push_back(std::max(0.0, 1.0 - mu));
        std::sort(rep.eigenvalues.begin(), rep.eigenvalues.end());
        rep.complete = rep.eigenvalues.size() == g.node_count();
        return rep;
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(detail::normalized_laplacian_dense(g), Eigen::EigenvaluesOnly);
    const auto& ev = es.eigenvalues();
    rep.eigenvalues.assign(ev.data(), ev.data() + ev.size());
    std::sort(rep.eigenvalues.begin(), rep.eigenvalues.end());
    return rep;
}

/// Eigenvalues of the nonsymmetric I − P computed directly (real parts,
/// ascending). Only meant as a cross-check on small graphs.
inline std::vector<double> laplacian_spectrum_direct(const Graph& g) {
    const auto n = static_cast<Eigen::Index>(g.node_count());
    Eigen::MatrixXd M = Eigen::MatrixXd::Identity(n, n);
    for (auto [u, v] : g.edges()) {
        M(u, v) -= 1.0 / static_cast<double>(g.degree(u));
        M(v, u) -= 1.0 / static_cast<double>(g.degree(v));
    }
    Eigen::EigenSolver<Eigen::MatrixXd> es(M, false);
    std::vector<double> out;
    for (Eigen::Index i = 0; i < n; ++i)
        out.push_back(es.eigenvalues()[i].real());
    std::sort(out.begin(), out.end());
    return out;
}

/// One report per connected component, in component order.
inline std::vector<SpectrumReport> component_spectra(const Graph& g, const SpectrumOptions& opt = {}) {
    std::vector<SpectrumReport> out;
    for (const auto& comp : connected_components(g)) {
        if (comp.size() == 1) {
            out.push_back({{0.0}, 1, true});
            continue;
        }
        out.push_back(laplacian_spectrum(induced_subgraph(g, comp), opt));
    }
    return out;
}

struct MixingTimes {
    double enter;
    double exit;
};

/// Entering and exiting time of the k-th local mixing state:
/// (1/lambda_{k+1}, 1/lambda_k), for 2 <= k < n.
inline MixingTimes mixing_times(const SpectrumReport& rep, std::size_t k) {
    if (k < 2 || k >= rep.node_count || k + 1 > rep.eigenvalues.size())
        throw std::out_of_range("mixing state index out of range");
    return {SpectrumReport::inverse(rep.lambda(k + 1)), SpectrumReport::inverse(rep.lambda(k))};
}

struct ConvergencePoint {
    int l;
    double vector_delta;
    std::size_t rank_delta;
};

/**
 * For l = 1..l_max: Euclidean distance between the degree-corrected vectors
 * at l−1 and l, and the number of positions at which the two ranked node
 * lists differ. The walk is always run to l_max (no early exit).
 */
inline std::vector<ConvergencePoint> convergence_trace(const Graph& g, NodeId s, const WalkConfig& cfg) {
    cfg.validate();
    std::vector<ConvergencePoint> out;
    auto beta = ProbabilityVector::delta(g.node_count(), s);
    auto psi = beta;
    auto order = rank_nodes(psi).order();
    for (int l = 1; l <= cfg.l_max; ++l) {
        if (auto next = try_constrained_step(g, beta))
            beta = std::move(*next);
        auto next_psi = degree_correct(g, beta);
        auto next_order = rank_nodes(next_psi).order();
        std::size_t diff = 0;
        for (std::size_t i = 0; i < order.size(); ++i)
            diff += order[i] != next_order[i] ? 1 : 0;
        out.push_back({l, next_psi.distance(psi), diff});
        psi = std::move(next_psi);
        order = std::move(next_order);
    }
    return out;
}

} // namespace ueoc
