#pragma once

// Spectral clustering: embed vertices with the bottom eigenvectors of a
// graph representation, run weighted k-means, evaluate recovery against a
// reference partition.

#include <Eigen/Dense>
#include <cstdint>
#include <utility>

#include "spectra_cert/errors.hpp"
#include "spectra_cert/graph.hpp"
#include "spectra_cert/indicators.hpp"
#include "spectra_cert/kmeans.hpp"
#include "spectra_cert/spectral.hpp"

namespace spectra_cert {

// Row scaling of the eigenvector matrix before k-means. paper_literal is
// D^{1/2} F; cluster_constant is D^{-1/2} F, under which an exact cluster
// structure embeds each cluster at a single point.
enum class EmbeddingScaling { paper_literal, cluster_constant };

inline std::string scaling_name(EmbeddingScaling s) {
    return s == EmbeddingScaling::paper_literal ? "paper_literal" : "cluster_constant";
}

inline EmbeddingScaling scaling_from_name(const std::string& s) {
    if (s == "paper_literal") return EmbeddingScaling::paper_literal;
    if (s == "cluster_constant") return EmbeddingScaling::cluster_constant;
    throw InputError("unknown embedding scaling '" + s + "'");
}

struct SpectralClusteringResult {
    Partition partition;
    KMeansResult kmeans;
    EigenSystem eigs;       // the eigenvectors that formed the embedding
    Embedding embedding;
};

namespace detail {

// k-means labels are arbitrary, but for digraphs the cyclic order matters to
// the cost functions: clusters sit near roots of unity whose phase falls by
// 2 pi / k along the intended order. Relabel by descending centroid angle of
// the first coordinate, then pick the rotation maximising the path
// objective (rotations leave the cyclic expansion unchanged).
inline void order_clusters_cyclically(const Graph& g, KMeansResult& km, int k) {
    std::vector<int> order(k);
    std::vector<double> angle(k);
    for (int c = 0; c < k; ++c) {
        order[c] = c;
        angle[c] = std::arg(km.centroids(c, 0));
    }
    std::stable_sort(order.begin(), order.end(),
                     [&](int a, int b) { return angle[a] > angle[b]; });

    std::vector<int> relabel(k);  // old label -> position in the sorted ring
    for (int pos = 0; pos < k; ++pos) relabel[order[pos]] = pos;
    std::vector<int> ring(km.assignment.size());
    for (std::size_t u = 0; u < km.assignment.size(); ++u)
        ring[u] = relabel[km.assignment[u]];

    int best_rot = 0;
    double best_theta = -1.0;
    std::vector<int> rotated(ring.size());
    for (int rot = 0; rot < k; ++rot) {
        for (std::size_t u = 0; u < ring.size(); ++u)
            rotated[u] = (ring[u] + rot) % k;
        const double th = theta_k(g, Partition(k, rotated));
        if (th > best_theta) {
            best_theta = th;
            best_rot = rot;
        }
    }
    for (std::size_t u = 0; u < ring.size(); ++u)
        km.assignment[u] = (ring[u] + best_rot) % k;
    Eigen::MatrixXcd reordered(k, km.centroids.cols());
    for (int pos = 0; pos < k; ++pos)
        reordered.row((pos + best_rot) % k) = km.centroids.row(order[pos]);
    km.centroids = reordered;
}

}  // namespace detail

// num_eigenvectors is Algorithm-style k-tilde (<= k); digraph clustering
// defaults to 1 since the bottom eigenvector of the Hermitian Laplacian
// already separates all k clusters. The representation's root order is k.
inline SpectralClusteringResult spectral_cluster(const Graph& g, int k,
                                                 int num_eigenvectors,
                                                 RepresentationKind kind,
                                                 EmbeddingScaling scaling,
                                                 std::uint64_t seed, int restarts = 10) {
    if (k < 1 || k > g.size()) throw InputError("need 1 <= k <= N");
    if (num_eigenvectors < 1) num_eigenvectors = g.directed() ? 1 : k;
    if (num_eigenvectors > k) throw InputError("num_eigenvectors must be <= k");

    const Representation rep = build_representation(g, kind, g.directed() ? k : 0);
    EigenSystem eigs = eigensystem(rep, num_eigenvectors);

    Embedding emb;
    emb.points = eigs.vectors;
    emb.weights.resize(g.size());
    for (int u = 0; u < g.size(); ++u) emb.weights(u) = g.degree(u);
    for (int u = 0; u < g.size(); ++u) {
        const double s = scaling == EmbeddingScaling::paper_literal
                             ? std::sqrt(g.degree(u))
                             : 1.0 / std::sqrt(g.degree(u));
        emb.points.row(u) *= s;
    }

    KMeansResult km = weighted_kmeans(emb, k, restarts, seed);
    if (g.directed() && k >= 2) detail::order_clusters_cyclically(g, km, k);
    Partition part(k, km.assignment);
    return {std::move(part), std::move(km), std::move(eigs), std::move(emb)};
}

// (symmetric-difference volume, fraction of vol(V)).
inline std::pair<double, double> evaluate_recovery(const Graph& g, const Partition& found,
                                                   const Partition& truth) {
    const double sd = symmetric_difference_volume(g, found, truth);
    return {sd, sd / g.volume()};
}

struct MisclassificationInputs {
    double U = 0.0;      // subspace distance between eigenvectors and indicator span
    double D = 0.0;      // min pairwise distance of cluster means in D^{1/2} F
    double alpha = 0.0;  // measured k-means approximation slack
    double min_cluster_vol = 0.0;
};

// Measures the quantities the k-means misclassification bound consumes.
// alpha is taken a posteriori as (solver objective) / (objective of the
// reference assignment) - 1, floored at zero; the solver carries no a
// priori approximation guarantee.
inline MisclassificationInputs misclassification_inputs(
    const Graph& g, const Partition& truth, const EigenSystem& eigs,
    const Embedding& embedding, const KMeansResult& found,
    const Eigen::MatrixXcd& indicator_span) {
    MisclassificationInputs out;
    out.U = true_subspace_distance(eigs.vectors, indicator_span);

    // cluster means of the D^{1/2}-scaled eigenvector rows
    const int k = truth.k(), d = static_cast<int>(eigs.vectors.cols());
    Eigen::MatrixXcd mu = Eigen::MatrixXcd::Zero(k, d);
    Eigen::VectorXd vol = Eigen::VectorXd::Zero(k);
    for (int u = 0; u < g.size(); ++u) {
        const double w = g.degree(u);
        mu.row(truth.cluster_of(u)) += w * std::sqrt(w) * eigs.vectors.row(u);
        vol(truth.cluster_of(u)) += w;
    }
    for (int c = 0; c < k; ++c) mu.row(c) /= vol(c);
    double dmin = std::numeric_limits<double>::infinity();
    for (int a = 0; a < k; ++a)
        for (int b = a + 1; b < k; ++b)
            dmin = std::min(dmin, (mu.row(a) - mu.row(b)).norm());
    out.D = dmin;
    out.min_cluster_vol = vol.minCoeff();

    const double ref = assignment_objective(embedding, truth.assignment(), k);
    out.alpha = ref > 1e-30 ? std::max(0.0, found.objective / ref - 1.0) : 0.0;
    return out;
}

}  // namespace spectra_cert
