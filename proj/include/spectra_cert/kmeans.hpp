#pragma once

// Weighted k-means in complex embedding space: k-means++ seeding with
// weight-proportional selection, Lloyd iterations with weighted centroids,
// empty-cluster repair, best of several restarts. Deterministic given the
// seed. The objective is asserted non-increasing on every Lloyd step.

#include <Eigen/Dense>
#include <cmath>
#include <cstdint>
#include <limits>
#include <vector>

#include "spectra_cert/errors.hpp"
#include "spectra_cert/graph.hpp"
#include "spectra_cert/rng.hpp"
#include "spectra_cert/threads.hpp"

namespace spectra_cert {

struct Embedding {
    Eigen::MatrixXcd points;  // N x d, row per vertex
    Eigen::VectorXd weights;  // positive, typically degrees
};

struct KMeansResult {
    std::vector<int> assignment;
    Eigen::MatrixXcd centroids;  // k x d
    double objective = 0.0;      // sum_u w(u) ||x_u - c_{a(u)}||^2
    int iterations = 0;
    int restarts_used = 0;
};

namespace detail {

// Complex rows as 2d-dimensional real rows; distances are identical.
inline Eigen::MatrixXd realify(const Eigen::MatrixXcd& pts) {
    Eigen::MatrixXd out(pts.rows(), 2 * pts.cols());
    out.leftCols(pts.cols()) = pts.real();
    out.rightCols(pts.cols()) = pts.imag();
    return out;
}

struct LloydOutcome {
    std::vector<int> assign;
    Eigen::MatrixXd centroids;
    double objective;
    int iterations;
};

inline double sqdist(const Eigen::MatrixXd& X, int row, const Eigen::MatrixXd& C, int c) {
    return (X.row(row) - C.row(c)).squaredNorm();
}

inline LloydOutcome lloyd_once(const Eigen::MatrixXd& X, const Eigen::VectorXd& w, int k,
                               Rng& rng) {
    const int n = static_cast<int>(X.rows());
    Eigen::MatrixXd C(k, X.cols());

    // weighted k-means++: first centre by weight, the rest by
    // weight * squared distance to the nearest chosen centre
    std::vector<double> score(n);
    auto pick = [&](const std::vector<double>& s) {
        double total = 0.0;
        for (double v : s) total += v;
        if (total <= 0.0) {
            double wt = 0.0;
            for (int i = 0; i < n; ++i) wt += w(i);
            double r = rng.uniform01() * wt, acc = 0.0;
            for (int i = 0; i < n; ++i) {
                acc += w(i);
                if (r < acc) return i;
            }
            return n - 1;
        }
        double r = rng.uniform01() * total, acc = 0.0;
        for (int i = 0; i < n; ++i) {
            acc += s[i];
            if (r < acc) return i;
        }
        return n - 1;
    };
    for (int i = 0; i < n; ++i) score[i] = w(i);
    C.row(0) = X.row(pick(score));
    std::vector<double> mind(n);
    for (int i = 0; i < n; ++i) mind[i] = sqdist(X, i, C, 0);
    for (int c = 1; c < k; ++c) {
        for (int i = 0; i < n; ++i) score[i] = w(i) * mind[i];
        C.row(c) = X.row(pick(score));
        for (int i = 0; i < n; ++i) mind[i] = std::min(mind[i], sqdist(X, i, C, c));
    }

    std::vector<int> assign(n, 0);
    double prev = std::numeric_limits<double>::infinity();
    double obj = 0.0;
    int iter = 0;
    while (iter < 300) {
        ++iter;
        obj = 0.0;
        for (int i = 0; i < n; ++i) {
            int best = 0;
            double bd = sqdist(X, i, C, 0);
            for (int c = 1; c < k; ++c) {
                const double d = sqdist(X, i, C, c);
                if (d < bd) { bd = d; best = c; }
            }
            assign[i] = best;
            obj += w(i) * bd;
        }
        if (obj > prev * (1.0 + 1e-9) + 1e-12)
            throw NumericError("k-means objective increased across a Lloyd iteration");
        if (std::isfinite(prev) && prev - obj <= 1e-9 * std::max(prev, 1e-300))
            break;  // converged; centroids stay consistent with obj/assignment
        prev = obj;

        // weighted centroid update with empty-cluster repair
        Eigen::MatrixXd sums = Eigen::MatrixXd::Zero(k, X.cols());
        Eigen::VectorXd wsum = Eigen::VectorXd::Zero(k);
        for (int i = 0; i < n; ++i) {
            sums.row(assign[i]) += w(i) * X.row(i);
            wsum(assign[i]) += w(i);
        }
        for (int c = 0; c < k; ++c) {
            if (wsum(c) > 0.0) {
                C.row(c) = sums.row(c) / wsum(c);
            } else {
                int far = 0;
                double fd = -1.0;
                for (int i = 0; i < n; ++i) {
                    const double d = w(i) * sqdist(X, i, C, assign[i]);
                    if (d > fd) { fd = d; far = i; }
                }
                C.row(c) = X.row(far);  // reseed on the worst-served point
            }
        }
    }
    return {assign, C, obj, iter};
}

}  // namespace detail

inline KMeansResult weighted_kmeans(const Embedding& e, int k, int restarts,
                                    std::uint64_t seed) {
    const int n = static_cast<int>(e.points.rows());
    if (k < 1) throw InputError("k must be >= 1");
    if (k > n) throw InputError("k exceeds the number of points");
    if (e.weights.size() != n) throw InputError("weight count does not match points");
    for (int i = 0; i < n; ++i)
        if (!(e.weights(i) > 0.0)) throw InputError("weights must be positive");
    if (restarts < 1) restarts = 1;

    const Eigen::MatrixXd X = detail::realify(e.points);
    // restarts are independent streams; run them concurrently and reduce in
    // index order so the result does not depend on scheduling
    std::vector<detail::LloydOutcome> outcomes(restarts);
    parallel_for(restarts, [&](int r) {
        Rng rng(derive_seed(seed, r));
        outcomes[r] = detail::lloyd_once(X, e.weights, k, rng);
    });
    detail::LloydOutcome best{};
    best.objective = std::numeric_limits<double>::infinity();
    for (auto& out : outcomes)
        if (out.objective < best.objective) best = std::move(out);

    KMeansResult res;
    res.assignment = best.assign;
    res.centroids.resize(k, e.points.cols());
    res.centroids.real() = best.centroids.leftCols(e.points.cols());
    res.centroids.imag() = best.centroids.rightCols(e.points.cols());
    res.objective = best.objective;
    res.iterations = best.iterations;
    res.restarts_used = restarts;
    return res;
}

// Weighted k-means objective of a fixed assignment with its optimal
// (weighted-mean) centroids; used to measure the solver's effective
// approximation ratio against a known partition.
inline double assignment_objective(const Embedding& e, const std::vector<int>& assign,
                                   int k) {
    const int n = static_cast<int>(e.points.rows());
    if (static_cast<int>(assign.size()) != n)
        throw InputError("assignment size does not match points");
    const Eigen::MatrixXd X = detail::realify(e.points);
    Eigen::MatrixXd sums = Eigen::MatrixXd::Zero(k, X.cols());
    Eigen::VectorXd wsum = Eigen::VectorXd::Zero(k);
    for (int i = 0; i < n; ++i) {
        if (assign[i] < 0 || assign[i] >= k) throw InputError("cluster index out of range");
        sums.row(assign[i]) += e.weights(i) * X.row(i);
        wsum(assign[i]) += e.weights(i);
    }
    for (int c = 0; c < k; ++c)
        if (wsum(c) > 0.0) sums.row(c) /= wsum(c);
    double obj = 0.0;
    for (int i = 0; i < n; ++i)
        obj += e.weights(i) * (X.row(i) - sums.row(assign[i])).squaredNorm();
    return obj;
}

}  // namespace spectra_cert
