/*
 * walk.hpp
 *
 * Random-walk iteration kernels: the plain l-step transition vector, the
 * walk constrained by the degree-preserving (annealed) null network, and the
 * one-shot degree correction applied to the constrained result.
 */

#pragma once

#include <cmath>
#include <cstddef>
#include <optional>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

#include "graph.hpp"

namespace ueoc {

enum class WalkMode {
    unconstrained,
    constrained,
    constrained_degree_corrected,
};

struct WalkConfig {
    int l_max = 20;
    double convergence_tol = 1e-12;
    WalkMode mode = WalkMode::constrained_degree_corrected;

    void validate() const {
        if (l_max < 0)
            throw std::invalid_argument("l_max must be non-negative");
        if (!(convergence_tol > 0))
            throw std::invalid_argument("convergence_tol must be positive");
    }
};

class AllZeroError : public std::runtime_error {
public:
    AllZeroError() : std::runtime_error("constrained step clipped every entry to zero") {}
};

/**
 * Nonnegative distribution over the nodes of a graph. Values are held densely
 * while `support` lists the nodes with a positive entry in ascending order,
 * so kernels only visit the support and its neighborhood.
 */
class ProbabilityVector {
public:
    ProbabilityVector() = default;
    explicit ProbabilityVector(std::size_t n) : values_(n, 0.0) {}

    static ProbabilityVector delta(std::size_t n, NodeId s) {
        if (s >= n)
            throw GraphError("seed out of range");
        ProbabilityVector v(n);
        v.values_[s] = 1.0;
        v.support_.push_back(s);
        return v;
    }

    /// Takes ownership of dense values; negative entries are rejected.
    static ProbabilityVector from_dense(std::vector<double> values) {
        ProbabilityVector v;
        v.values_ = std::move(values);
        for (NodeId i = 0; i < v.values_.size(); ++i) {
            if (v.values_[i] < 0)
                throw std::invalid_argument("probability entries must be nonnegative");
            if (v.values_[i] > 0)
                v.support_.push_back(i);
        }
        return v;
    }

    std::size_t size() const noexcept { return values_.size(); }
    double operator[](NodeId i) const { return values_[i]; }
    const std::vector<double>& values() const noexcept { return values_; }
    const std::vector<NodeId>& support() const noexcept { return support_; }

    double sum() const {
        double s = 0;
        for (NodeId i : support_)
            s += values_[i];
        return s;
    }

    /// Euclidean distance to another vector of the same size.
    double distance(const ProbabilityVector& o) const {
        double acc = 0;
        for (std::size_t i = 0; i < values_.size(); ++i) {
            double d = values_[i] - o.values_[i];
            acc += d * d;
        }
        return std::sqrt(acc);
    }

private:
    friend struct VectorBuilder;
    std::vector<double> values_;
    std::vector<NodeId> support_;
};

/// Scratch accumulator used by the step kernels.
struct VectorBuilder {
    std::vector<double> values;
    std::vector<NodeId> touched;
    std::vector<bool> mark;

    explicit VectorBuilder(std::size_t n) : values(n, 0.0), mark(n, false) {}

    void touch(NodeId i) {
        if (!mark[i]) {
            mark[i] = true;
            touched.push_back(i);
        }
    }

    ProbabilityVector finish(bool normalize) {
        std::sort(touched.begin(), touched.end());
        ProbabilityVector v;
        double total = 0;
        for (NodeId i : touched)
            if (values[i] > 0) {
                v.support_.push_back(i);
                total += values[i];
            } else {
                values[i] = 0.0;
            }
        if (normalize && total > 0)
            for (NodeId i : v.support_)
                values[i] /= total;
        v.values_ = std::move(values);
        return v;
    }
};

namespace detail {

inline void check_size(const Graph& g, const ProbabilityVector& v) {
    if (v.size() != g.node_count())
        throw std::invalid_argument("vector size does not match graph");
}

/// w(i) = sum_r v(r) a_ri / d_r, scattered from the support. Each w(i) receives
/// its terms in ascending r, matching a dense gather.
inline VectorBuilder scatter(const Graph& g, const ProbabilityVector& v) {
    VectorBuilder b(g.node_count());
    for (NodeId r : v.support()) {
        const double share = v[r] / static_cast<double>(g.degree(r));
        for (NodeId i : g.neighbors(r)) {
            b.touch(i);
            b.values[i] += share;
        }
    }
    return b;
}

} // namespace detail

/// One step of the unconstrained walk.
inline ProbabilityVector transition_step(const Graph& g, const ProbabilityVector& v) {
    detail::check_size(g, v);
    return detail::scatter(g, v).finish(false);
}

/**
 * Mass that the annealed null network moves onto node i in one step,
 * sum_r v(r) q_ri. Since q_ri = b_ri / sum_j b_rj = d_i / 2m for every r,
 * this is d_i / 2m times the mass of v, and v sums to one.
 */
inline double annealed_term(const Graph& g, const ProbabilityVector& v, NodeId i) {
    detail::check_size(g, v);
    return static_cast<double>(g.degree(i)) / static_cast<double>(g.total_degree());
}

/**
 * One constrained step: max(P-step − annealed term, 0), renormalized.
 * Nodes outside support ∪ N(support) would receive max(0 − d_i/2m, 0) = 0,
 * so only the scattered neighborhood is evaluated. Returns nullopt when every
 * entry clips to zero.
 */
inline std::optional<ProbabilityVector> try_constrained_step(const Graph& g, const ProbabilityVector& v) {
    detail::check_size(g, v);
    auto b = detail::scatter(g, v);
    const double two_m = static_cast<double>(g.total_degree());
    for (NodeId i : b.touched) {
        double x = b.values[i] - static_cast<double>(g.degree(i)) / two_m;
        b.values[i] = x > 0 ? x : 0.0;
    }
    auto w = b.finish(true);
    if (w.support().empty())
        return std::nullopt;
    return w;
}

inline ProbabilityVector constrained_step(const Graph& g, const ProbabilityVector& v) {
    auto w = try_constrained_step(g, v);
    if (!w)
        throw AllZeroError();
    return std::move(*w);
}

/// Divides each entry by the node degree and renormalizes. Applied once to
/// the walk result, never inside the iteration.
inline ProbabilityVector degree_correct(const Graph& g, const ProbabilityVector& v) {
    detail::check_size(g, v);
    VectorBuilder b(g.node_count());
    for (NodeId i : v.support()) {
        b.touch(i);
        b.values[i] = v[i] / static_cast<double>(g.degree(i));
    }
    return b.finish(true);
}

struct WalkResult {
    ProbabilityVector vector;
    int steps = 0;
    /// Euclidean distance between consecutive iterates, one per step taken.
    std::vector<double> deltas;
    /// Set when a constrained step clipped everything; `vector` then holds
    /// the last iterate with positive mass.
    bool all_zero = false;
};

/**
 * Iterates from the point mass on s until l_max steps or until consecutive
 * iterates are closer than convergence_tol. In degree-corrected mode the
 * iteration is the constrained one and the correction is applied at the end.
 */
inline WalkResult run_walk(const Graph& g, NodeId s, const WalkConfig& cfg) {
    cfg.validate();
    WalkResult res;
    res.vector = ProbabilityVector::delta(g.node_count(), s);
    for (int l = 1; l <= cfg.l_max; ++l) {
        ProbabilityVector next;
        if (cfg.mode == WalkMode::unconstrained) {
            next = transition_step(g, res.vector);
        } else {
            auto w = try_constrained_step(g, res.vector);
            if (!w) {
                res.all_zero = true;
                break;
            }
            next = std::move(*w);
        }
        double delta = next.distance(res.vector);
        res.vector = std::move(next);
        res.steps = l;
        res.deltas.push_back(delta);
        if (delta < cfg.convergence_tol)
            break;
    }
    if (cfg.mode == WalkMode::constrained_degree_corrected)
        res.vector = degree_correct(g, res.vector);
    return res;
}

struct DenseWalkOptions {
    std::size_t node_cap = 2048;
};

/**
 * Dense l-step matrix whose row i is the walk started at node i, computed
 * with full matrices: P from the adjacency, and the annealed transition
 * matrix Q built literally from b_ij = d_i d_j / sum_r d_r. Rows that clip to
 * zero keep their previous value. Serves as the brute-force reference for
 * the sparse kernels and as plot data.
 */
inline Eigen::MatrixXd dense_transition_matrix(const Graph& g, WalkMode mode, int l,
                                               const DenseWalkOptions& opt = {}) {
    const auto n = static_cast<Eigen::Index>(g.node_count());
    if (g.node_count() > opt.node_cap)
        throw GraphError("graph has " + std::to_string(n) + " nodes, above the dense cap of " +
                         std::to_string(opt.node_cap) + "; use run_walk per seed instead");
    if (l < 0)
        throw std::invalid_argument("step count must be non-negative");

    Eigen::MatrixXd A = Eigen::MatrixXd::Zero(n, n);
    for (auto [u, v] : g.edges()) {
        A(u, v) = 1.0;
        A(v, u) = 1.0;
    }
    Eigen::VectorXd d = A.rowwise().sum();
    Eigen::MatrixXd P = d.cwiseInverse().asDiagonal() * A;

    Eigen::MatrixXd Q;
    if (mode != WalkMode::unconstrained) {
        const double total = d.sum();
        Eigen::MatrixXd B = d * d.transpose() / total;
        Eigen::VectorXd rows = B.rowwise().sum();
        Q = rows.cwiseInverse().asDiagonal() * B;
    }

    Eigen::MatrixXd X = Eigen::MatrixXd::Identity(n, n);
    for (int step = 0; step < l; ++step) {
        if (mode == WalkMode::unconstrained) {
            X = X * P;
            continue;
        }
        Eigen::MatrixXd Y = (X * P - X * Q).cwiseMax(0.0);
        for (Eigen::Index i = 0; i < n; ++i) {
            double s = Y.row(i).sum();
            if (s > 0)
                X.row(i) = Y.row(i) / s;
        }
    }
    if (mode == WalkMode::constrained_degree_corrected) {
        X = X * d.cwiseInverse().asDiagonal();
        for (Eigen::Index i = 0; i < n; ++i)
            X.row(i) /= X.row(i).sum();
    }
    return X;
}

} // namespace ueoc
