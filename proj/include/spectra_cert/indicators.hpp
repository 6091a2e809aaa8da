#pragma once

// Cluster indicator vectors, their Rayleigh quotients, alignment matrices
// and exact subspace distances. These are the quantities the structure
// bounds certify, so everything here is validated tightly.

#include <Eigen/Dense>
#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include "spectra_cert/errors.hpp"
#include "spectra_cert/graph.hpp"
#include "spectra_cert/spectral.hpp"

namespace spectra_cert {

enum class IndicatorSource { degree_indicator, digraph_chi, first_eigvec_replaced };

namespace detail {

inline void check_orthonormal(const Eigen::MatrixXcd& V, double tol, const char* who) {
    const Eigen::MatrixXcd gram = V.adjoint() * V;
    const double err = (gram - Eigen::MatrixXcd::Identity(V.cols(), V.cols()))
                           .cwiseAbs()
                           .maxCoeff();
    if (err > tol)
        throw InputError(std::string(who) + ": columns not orthonormal (max deviation " +
                         std::to_string(err) + ")");
}

inline double real_quadratic_form(const Eigen::MatrixXcd& M, const Eigen::VectorXcd& v,
                                  double imag_tol = 1e-10) {
    const std::complex<double> q = v.adjoint() * (M * v);
    if (std::abs(q.imag()) > imag_tol * std::max(1.0, std::abs(q.real())))
        throw NumericError("Rayleigh quotient has non-negligible imaginary part");
    return q.real();
}

}  // namespace detail

// Orthonormal vectors g_1..g_k with Rayleigh quotients gamma_1 <= ... <=
// gamma_k against the representation they were built for.
struct IndicatorSet {
    Eigen::MatrixXcd vectors;   // N x k
    Eigen::VectorXd rayleigh;   // ascending
    IndicatorSource source;
};

// Validates orthonormality, computes Rayleigh quotients against M and sorts
// columns by them.
inline IndicatorSet make_indicator_set(const Eigen::MatrixXcd& columns,
                                       const Eigen::MatrixXcd& M,
                                       IndicatorSource source) {
    detail::check_orthonormal(columns, 1e-10, "indicator set");
    const int k = static_cast<int>(columns.cols());
    std::vector<std::pair<double, int>> order(k);
    for (int i = 0; i < k; ++i)
        order[i] = {detail::real_quadratic_form(M, columns.col(i)), i};
    std::stable_sort(order.begin(), order.end(),
                     [](const auto& a, const auto& b) { return a.first < b.first; });
    IndicatorSet out;
    out.vectors.resize(columns.rows(), k);
    out.rayleigh.resize(k);
    for (int i = 0; i < k; ++i) {
        out.vectors.col(i) = columns.col(order[i].second);
        out.rayleigh(i) = order[i].first;
    }
    out.source = source;
    return out;
}

// g_i(u) = sqrt(d(u)/vol(S_i)) on S_i, zero elsewhere. Orthonormal by
// disjoint support; against the normalised Laplacian gamma_i = Phi(S_i).
inline IndicatorSet degree_indicators(const Graph& g, const Partition& p,
                                      const Eigen::MatrixXcd& M) {
    if (g.directed()) throw InputError("degree indicators are for undirected graphs");
    if (p.size() != g.size()) throw InputError("partition size does not match graph");
    Eigen::MatrixXcd cols = Eigen::MatrixXcd::Zero(g.size(), p.k());
    std::vector<double> vol(p.k(), 0.0);
    for (int u = 0; u < g.size(); ++u) vol[p.cluster_of(u)] += g.degree(u);
    for (int c = 0; c < p.k(); ++c)
        if (vol[c] <= 0.0) throw InputError("zero-volume cluster");
    for (int u = 0; u < g.size(); ++u)
        cols(u, p.cluster_of(u)) = std::sqrt(g.degree(u) / vol[p.cluster_of(u)]);
    return make_indicator_set(cols, M, IndicatorSource::degree_indicator);
}

inline IndicatorSet degree_indicators(const Graph& g, const Partition& p) {
    return degree_indicators(
        g, p, build_representation(g, RepresentationKind::normalized_laplacian).matrix);
}

// Single phased indicator chi_S(u) = sqrt(d(u)/vol(V)) exp(-2i*pi*j/k) for
// u in S_j; unit norm since the d(u)/vol(V) sum to one. The phase decreases
// along the cyclic order, matching the null direction of the Hermitian
// Laplacian on a perfect S_i -> S_{i+1} structure (see spectral.hpp).
inline IndicatorSet digraph_chi(const Graph& g, const Partition& p,
                                const Eigen::MatrixXcd& M) {
    if (!g.directed()) throw InputError("digraph chi needs a directed graph");
    if (p.k() < 2) throw InputError("digraph chi needs k >= 2");
    if (p.size() != g.size()) throw InputError("partition size does not match graph");
    Eigen::VectorXcd chi(g.size());
    const double vol = g.volume();
    for (int u = 0; u < g.size(); ++u)
        chi(u) = std::sqrt(g.degree(u) / vol) *
                 std::polar(1.0, -2.0 * std::numbers::pi * p.cluster_of(u) / p.k());
    Eigen::MatrixXcd cols(g.size(), 1);
    cols.col(0) = chi;
    return make_indicator_set(cols, M, IndicatorSource::digraph_chi);
}

inline IndicatorSet digraph_chi(const Graph& g, const Partition& p) {
    return digraph_chi(
        g, p,
        build_representation(g, RepresentationKind::normalized_hermitian_laplacian, p.k())
            .matrix);
}

// Replaces the lowest-Rayleigh column by f1 and re-orthogonalises the
// remaining columns against it (and each other) in stored order, or in the
// order given by `order` over indices 1..k-1. Rayleigh quotients are
// recomputed against M and re-sorted over the non-first columns.
inline IndicatorSet replace_first(const IndicatorSet& ind, const Eigen::VectorXcd& f1,
                                  const Eigen::MatrixXcd& M,
                                  const std::vector<int>& order = {}) {
    const int k = static_cast<int>(ind.vectors.cols());
    if (f1.size() != ind.vectors.rows()) throw InputError("f1 has wrong dimension");
    if (std::abs(f1.norm() - 1.0) > 1e-8) throw InputError("f1 must be unit norm");
    detail::check_orthonormal(ind.vectors, 1e-8, "replace_first input");

    std::vector<int> seq;
    if (order.empty()) {
        for (int i = 1; i < k; ++i) seq.push_back(i);
    } else {
        if (static_cast<int>(order.size()) != k - 1)
            throw InputError("order must list the k-1 non-first columns");
        std::vector<int> sorted = order;
        std::sort(sorted.begin(), sorted.end());
        for (int i = 1; i < k; ++i)
            if (sorted[i - 1] != i)
                throw InputError("order must be a permutation of 1..k-1");
        seq = order;
    }

    Eigen::MatrixXcd cols(ind.vectors.rows(), k);
    cols.col(0) = f1;
    int filled = 1;
    for (int idx : seq) {
        if (idx < 1 || idx >= k) throw InputError("order index out of range");
        Eigen::VectorXcd v = ind.vectors.col(idx);
        for (int pass = 0; pass < 2; ++pass)  // second pass restores orthogonality
            for (int j = 0; j < filled; ++j)
                v -= cols.col(j).dot(v) * cols.col(j);
        const double nrm = v.norm();
        if (nrm < 1e-10)
            throw NumericError("rank collapse: indicator column parallel to f1");
        cols.col(filled++) = v / nrm;
    }

    IndicatorSet out;
    out.vectors.resize(ind.vectors.rows(), k);
    out.vectors.col(0) = cols.col(0);
    std::vector<std::pair<double, int>> rest;
    for (int i = 1; i < k; ++i)
        rest.push_back({detail::real_quadratic_form(M, cols.col(i)), i});
    std::stable_sort(rest.begin(), rest.end(),
                     [](const auto& a, const auto& b) { return a.first < b.first; });
    out.rayleigh.resize(k);
    out.rayleigh(0) = detail::real_quadratic_form(M, cols.col(0));
    for (int i = 1; i < k; ++i) {
        out.vectors.col(i) = cols.col(rest[i - 1].second);
        out.rayleigh(i) = rest[i - 1].first;
    }
    out.source = IndicatorSource::first_eigvec_replaced;
    return out;
}

// Rotates the columns to the eigenbasis of the projected operator G* M G.
// The span (and hence any cluster-constancy of D^{-1/2} g) is unchanged;
// the Rayleigh quotients become the Ritz values, whose ascending prefix
// sums are minimal over all orthonormal bases of the span. The recursive
// bound pairs Rayleigh quotients with eigenvalues by rank, so it is applied
// to this basis.
inline IndicatorSet ritz_rotate(const IndicatorSet& ind, const Eigen::MatrixXcd& M) {
    const Eigen::MatrixXcd projected = ind.vectors.adjoint() * M * ind.vectors;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(
        0.5 * (projected + projected.adjoint()));
    if (solver.info() != Eigen::Success)
        throw NumericError("projected eigendecomposition failed");
    IndicatorSet out;
    out.vectors = ind.vectors * solver.eigenvectors();
    out.rayleigh = solver.eigenvalues();
    out.source = ind.source;
    return out;
}

// Q = F* G. Unitary when both bases are square.
inline Eigen::MatrixXcd alignment_matrix(const Eigen::MatrixXcd& F,
                                         const Eigen::MatrixXcd& G) {
    detail::check_orthonormal(F, 1e-8, "alignment F");
    detail::check_orthonormal(G, 1e-8, "alignment G");
    return F.adjoint() * G;
}

// sum_i min_{g in span(G)} ||f_i - g||^2 = m - ||G* F||_F^2 for orthonormal
// F (N x m) and G (N x k). m > k is allowed.
inline double true_subspace_distance(const Eigen::MatrixXcd& F_block,
                                     const Eigen::MatrixXcd& G) {
    detail::check_orthonormal(F_block, 1e-8, "subspace distance F");
    detail::check_orthonormal(G, 1e-8, "subspace distance G");
    const double m = static_cast<double>(F_block.cols());
    return std::max(0.0, m - (G.adjoint() * F_block).squaredNorm());
}

}  // namespace spectra_cert
