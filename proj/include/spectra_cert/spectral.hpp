#pragma once

// Hermitian PSD matrix representations of graphs and their eigensystems.
//
// Directed edges are encoded with root-of-unity phases (A_uv = w exp(2i*pi/r)
// for u -> v, conjugate on the transpose). Under this sign convention a
// vector is annihilated by the Hermitian Laplacian exactly when following an
// edge u -> v drops the phase by 2*pi/r, i.e. clusters ordered along a
// directed cycle carry phases exp(-2i*pi*j/r).

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <string>
#include <vector>

#include "spectra_cert/errors.hpp"
#include "spectra_cert/graph.hpp"

namespace spectra_cert {

enum class RepresentationKind {
    combinatorial_laplacian,        // L = D - A (undirected)
    normalized_laplacian,           // I - D^{-1/2} A D^{-1/2} (undirected)
    hermitian_laplacian,            // D - A with phased adjacency (digraph)
    normalized_hermitian_laplacian  // normalised variant (digraph)
};

inline bool representation_is_directed(RepresentationKind k) {
    return k == RepresentationKind::hermitian_laplacian ||
           k == RepresentationKind::normalized_hermitian_laplacian;
}

inline bool representation_is_normalized(RepresentationKind k) {
    return k == RepresentationKind::normalized_laplacian ||
           k == RepresentationKind::normalized_hermitian_laplacian;
}

inline std::string representation_name(RepresentationKind k) {
    switch (k) {
        case RepresentationKind::combinatorial_laplacian: return "combinatorial_laplacian";
        case RepresentationKind::normalized_laplacian: return "normalized_laplacian";
        case RepresentationKind::hermitian_laplacian: return "hermitian_laplacian";
        case RepresentationKind::normalized_hermitian_laplacian:
            return "normalized_hermitian_laplacian";
    }
    return "?";
}

inline RepresentationKind representation_from_name(const std::string& s) {
    if (s == "combinatorial_laplacian") return RepresentationKind::combinatorial_laplacian;
    if (s == "normalized_laplacian") return RepresentationKind::normalized_laplacian;
    if (s == "hermitian_laplacian") return RepresentationKind::hermitian_laplacian;
    if (s == "normalized_hermitian_laplacian")
        return RepresentationKind::normalized_hermitian_laplacian;
    throw InputError("unknown representation '" + s + "'");
}

struct Representation {
    RepresentationKind kind;
    int root_order = 0;  // root-of-unity order, digraph kinds only
    Eigen::MatrixXcd matrix;
};

inline Representation build_representation(const Graph& g, RepresentationKind kind,
                                           int root_order = 0) {
    const bool need_directed = representation_is_directed(kind);
    if (need_directed != g.directed())
        throw InputError("representation kind does not match graph directedness");
    if (need_directed && root_order < 1)
        throw InputError("digraph representations need root order >= 1");
    const int n = g.size();
    Eigen::MatrixXcd A = Eigen::MatrixXcd::Zero(n, n);
    if (need_directed) {
        const std::complex<double> w_ph =
            std::polar(1.0, 2.0 * std::numbers::pi / root_order);
        for (const auto& e : g.edges()) {
            A(e.u, e.v) += e.w * w_ph;
            A(e.v, e.u) += e.w * std::conj(w_ph);
        }
    } else {
        for (const auto& e : g.edges()) {
            A(e.u, e.v) += e.w;
            A(e.v, e.u) += e.w;
        }
    }
    Eigen::MatrixXcd M;
    if (representation_is_normalized(kind)) {
        Eigen::VectorXd dmh(n);
        for (int u = 0; u < n; ++u) dmh(u) = 1.0 / std::sqrt(g.degree(u));
        M = Eigen::MatrixXcd::Identity(n, n) -
            dmh.asDiagonal() * A * dmh.asDiagonal();
    } else {
        Eigen::VectorXcd d(n);
        for (int u = 0; u < n; ++u) d(u) = g.degree(u);
        M = Eigen::MatrixXcd(d.asDiagonal()) - A;
    }
    const double scale = M.cwiseAbs().maxCoeff();
    if ((M - M.adjoint()).cwiseAbs().maxCoeff() > 1e-12 * std::max(scale, 1e-300))
        throw NumericError("representation is not Hermitian");
    return {kind, need_directed ? root_order : 0, std::move(M)};
}

// Sorted eigenvalues (all N of them) plus the orthonormal eigenvectors that
// were requested. Eigenvector phases are gauged so the largest-magnitude
// entry of each column is real positive (first such entry on ties).
struct EigenSystem {
    Eigen::VectorXd eigenvalues;  // ascending, length N
    Eigen::MatrixXcd vectors;     // N x num, column i pairs with eigenvalues(i)
};

inline EigenSystem eigensystem(const Representation& r, int num = -1) {
    const int n = static_cast<int>(r.matrix.rows());
    if (num < 0) num = n;
    if (num > n) throw InputError("requested more eigenpairs than the dimension");
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(r.matrix);
    if (solver.info() != Eigen::Success)
        throw NumericError("eigendecomposition failed to converge");
    EigenSystem es;
    es.eigenvalues = solver.eigenvalues();
    es.vectors = solver.eigenvectors().leftCols(num);

    const double lam_max = std::max(0.0, es.eigenvalues(n - 1));
    // residual + orthonormality guard before touching the values
    const double tol = 1e-8 * (1.0 + lam_max);
    for (int i = 0; i < num; ++i) {
        const double res =
            (r.matrix * es.vectors.col(i) - es.eigenvalues(i) * es.vectors.col(i)).norm();
        if (res > tol) throw NumericError("eigenpair residual above tolerance");
    }
    if (es.eigenvalues(0) < -1e-8 * std::max(lam_max, 1e-300))
        throw NumericError("representation is not positive semidefinite (lambda_min = " +
                           std::to_string(es.eigenvalues(0)) + ")");
    for (int i = 0; i < n; ++i)
        if (es.eigenvalues(i) < 0.0) es.eigenvalues(i) = 0.0;  // fp noise

    for (int i = 0; i < num; ++i) {
        int arg = 0;
        double best = -1.0;
        for (int u = 0; u < n; ++u) {
            const double m = std::abs(es.vectors(u, i));
            if (m > best) { best = m; arg = u; }
        }
        if (best > 0.0) es.vectors.col(i) *= std::conj(es.vectors(arg, i)) / best;
    }
    return es;
}

// Splits eigenvalues 1..k into groups separated by dominant gaps, returning
// boundaries 0 = q_0 < q_1 < ... < q_m = k. A cut between lambda_q and
// lambda_{q+1} is accepted (largest gap first) while its gap both exceeds
// gap_fraction of the spread lambda_{k+1} - lambda_1 and strictly dominates
// twice the median interior gap; max_groups caps the number of groups.
inline std::vector<int> detect_gap_groups(const Eigen::VectorXd& eigenvalues, int k,
                                          int max_groups = 1 << 20,
                                          double gap_fraction = 0.1) {
    const int n = static_cast<int>(eigenvalues.size());
    if (k < 1 || k >= n) throw InputError("detect_gap_groups needs 1 <= k < N");
    if (max_groups < 1) throw InputError("max_groups must be >= 1");
    const double spread = eigenvalues(k) - eigenvalues(0);
    if (spread <= 1e-14 * std::max(1.0, std::abs(eigenvalues(k))))
        throw NumericError("degenerate spectrum: lambda_{k+1} <= lambda_1");

    std::vector<double> gap(k + 1, 0.0);  // gap[q] between lambda_q and lambda_{q+1}
    for (int q = 1; q <= k - 1; ++q) gap[q] = eigenvalues(q) - eigenvalues(q - 1);
    std::vector<double> interior(gap.begin() + 1, gap.begin() + k);
    std::vector<double> sorted = interior;
    std::sort(sorted.begin(), sorted.end());
    const int m = static_cast<int>(sorted.size());
    const double median =
        m == 0 ? 0.0
               : (m % 2 ? sorted[m / 2] : 0.5 * (sorted[m / 2 - 1] + sorted[m / 2]));

    std::vector<int> order(std::max(0, k - 1));
    for (int q = 1; q <= k - 1; ++q) order[q - 1] = q;
    std::sort(order.begin(), order.end(),
              [&](int a, int b) { return gap[a] > gap[b] || (gap[a] == gap[b] && a < b); });

    std::vector<int> cuts;
    for (int q : order) {
        if (static_cast<int>(cuts.size()) + 1 >= max_groups) break;
        if (gap[q] <= gap_fraction * spread) break;  // descending order: rest fail too
        if (gap[q] <= 2.0 * median) continue;
        cuts.push_back(q);
    }
    cuts.push_back(0);
    cuts.push_back(k);
    std::sort(cuts.begin(), cuts.end());
    return cuts;
}

}  // namespace spectra_cert
