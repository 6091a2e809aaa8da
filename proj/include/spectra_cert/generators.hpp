#pragma once

// Seeded synthetic graph families and deterministic fixtures. Everything is
// a pure function of (params, seed); the RNG is pinned in rng.hpp so runs
// replicate bit-for-bit across platforms.

#include <cmath>
#include <iostream>
#include <utility>
#include <vector>

#include "spectra_cert/errors.hpp"
#include "spectra_cert/graph.hpp"
#include "spectra_cert/rng.hpp"

namespace spectra_cert {

struct SbmParams {
    int k = 2;           // number of blocks
    int n = 50;          // vertices per block
    std::vector<std::vector<double>> P;  // k x k symmetric edge probabilities
};

struct DsbmParams {
    int k = 2;
    int n = 50;
    std::vector<std::vector<double>> P;  // symmetric edge probabilities
    std::vector<std::vector<double>> F;  // orientation: u->v with prob F_ij
};

struct GeometricParams {
    std::vector<std::pair<double, double>> centres;
    int points_per_centre = 100;
    double std_dev = 1.0;
    double threshold = 4.0;
};

namespace detail {

inline void check_probability_matrix(const std::vector<std::vector<double>>& P, int k,
                                     const char* name, bool symmetric) {
    if (static_cast<int>(P.size()) != k) throw InputError(std::string(name) + " must be k x k");
    for (int i = 0; i < k; ++i) {
        if (static_cast<int>(P[i].size()) != k)
            throw InputError(std::string(name) + " must be k x k");
        for (int j = 0; j < k; ++j) {
            if (P[i][j] < 0.0 || P[i][j] > 1.0)
                throw InputError(std::string(name) + " entries must lie in [0,1]");
            if (symmetric && std::abs(P[i][j] - P[j][i]) > 1e-12)
                throw InputError(std::string(name) + " must be symmetric");
        }
    }
}

inline Partition block_partition(int k, int n) {
    std::vector<int> assign(static_cast<std::size_t>(k) * n);
    for (int u = 0; u < k * n; ++u) assign[u] = u / n;
    return Partition(k, std::move(assign));
}

}  // namespace detail

// Undirected stochastic block model: each unordered pair {u,v} with u in
// block i, v in block j gets an edge independently with probability P_ij.
inline std::pair<Graph, Partition> gen_sbm(const SbmParams& p, std::uint64_t seed) {
    if (p.k < 2 || p.n < 1) throw InputError("SBM needs k >= 2, n >= 1");
    detail::check_probability_matrix(p.P, p.k, "P", true);
    Rng rng(seed);
    const int N = p.k * p.n;
    std::vector<Edge> edges;
    for (int u = 0; u < N; ++u)
        for (int v = u + 1; v < N; ++v)
            if (rng.bernoulli(p.P[u / p.n][v / p.n])) edges.push_back({u, v, 1.0});
    return {Graph(N, false, std::move(edges)), detail::block_partition(p.k, p.n)};
}

// Directed SBM: undirected edge sampled with P_ij, then oriented u -> v with
// probability F_ij. The anti-parallel convention holds by construction.
inline std::pair<Graph, Partition> gen_dsbm(const DsbmParams& p, std::uint64_t seed) {
    if (p.k < 2 || p.n < 1) throw InputError("DSBM needs k >= 2, n >= 1");
    detail::check_probability_matrix(p.P, p.k, "P", true);
    detail::check_probability_matrix(p.F, p.k, "F", false);
    for (int i = 0; i < p.k; ++i)
        for (int j = 0; j < p.k; ++j)
            if (std::abs(p.F[i][j] + p.F[j][i] - 1.0) > 1e-12)
                throw InputError("F_ij + F_ji must equal 1");
    Rng rng(seed);
    const int N = p.k * p.n;
    std::vector<Edge> edges;
    for (int u = 0; u < N; ++u)
        for (int v = u + 1; v < N; ++v) {
            const int i = u / p.n, j = v / p.n;
            if (!rng.bernoulli(p.P[i][j])) continue;
            if (rng.bernoulli(p.F[i][j]))
                edges.push_back({u, v, 1.0});
            else
                edges.push_back({v, u, 1.0});
        }
    return {Graph(N, true, std::move(edges)), detail::block_partition(p.k, p.n)};
}

// Gaussian mixture geometric graph: unit-weight edge iff Euclidean distance
// is below the threshold. Regenerates (with a warning) when a draw leaves an
// isolated vertex rather than silently connecting it.
inline std::pair<Graph, Partition> gen_geometric(const GeometricParams& p,
                                                 std::uint64_t seed) {
    if (p.centres.empty()) throw InputError("geometric generator needs centres");
    if (p.points_per_centre < 1) throw InputError("points_per_centre must be >= 1");
    if (p.std_dev <= 0.0) throw InputError("std_dev must be positive");
    if (p.threshold <= 0.0) throw InputError("threshold must be positive");
    const int k = static_cast<int>(p.centres.size());
    const int N = k * p.points_per_centre;
    for (int attempt = 0; attempt < 10; ++attempt) {
        Rng rng(derive_seed(seed, attempt));
        std::vector<double> x(N), y(N);
        for (int c = 0; c < k; ++c)
            for (int i = 0; i < p.points_per_centre; ++i) {
                const int u = c * p.points_per_centre + i;
                x[u] = p.centres[c].first + p.std_dev * rng.gaussian();
                y[u] = p.centres[c].second + p.std_dev * rng.gaussian();
            }
        std::vector<Edge> edges;
        const double t2 = p.threshold * p.threshold;
        for (int u = 0; u < N; ++u)
            for (int v = u + 1; v < N; ++v) {
                const double dx = x[u] - x[v], dy = y[u] - y[v];
                if (dx * dx + dy * dy < t2) edges.push_back({u, v, 1.0});
            }
        try {
            return {Graph(N, false, std::move(edges)),
                    detail::block_partition(k, p.points_per_centre)};
        } catch (const InputError&) {
            std::cerr << "warning: geometric draw " << attempt
                      << " produced an isolated vertex, regenerating\n";
        }
    }
    throw InputError("geometric generator: isolated vertex in 10 consecutive draws");
}

struct FixtureParams {
    int clique_size = 50;       // two_clique_matching
    double match_weight = 20.0;
    double clique_weight = 1.0;
    int blocks = 5;             // perfect_cycle / perfect_path
    int block_size = 5;
};

// Deterministic fixtures:
//   two_clique_matching: two cliques joined by a heavy perfect matching
//   perfect_cycle:       complete bipartite S_i -> S_{i+1 mod k} digraph
//   perfect_path:        the same without the wrap-around edges
inline std::pair<Graph, Partition> fixture(const std::string& name,
                                           const FixtureParams& p = {}) {
    if (name == "two_clique_matching") {
        const int m = p.clique_size;
        if (m < 2) throw InputError("clique_size must be >= 2");
        std::vector<Edge> edges;
        for (int side = 0; side < 2; ++side)
            for (int i = 0; i < m; ++i)
                for (int j = i + 1; j < m; ++j)
                    edges.push_back({side * m + i, side * m + j, p.clique_weight});
        for (int i = 0; i < m; ++i) edges.push_back({i, m + i, p.match_weight});
        std::vector<int> assign(2 * m, 0);
        for (int i = 0; i < m; ++i) assign[m + i] = 1;
        return {Graph(2 * m, false, std::move(edges)), Partition(2, std::move(assign))};
    }
    if (name == "perfect_cycle" || name == "perfect_path") {
        const int k = p.blocks, b = p.block_size;
        if (k < 2 || b < 1) throw InputError("need blocks >= 2 and block_size >= 1");
        const bool wrap = (name == "perfect_cycle");
        if (wrap && k == 2)
            throw InputError(
                "perfect_cycle needs blocks >= 3 (a 2-block cycle would need "
                "anti-parallel edges)");
        std::vector<Edge> edges;
        for (int i = 0; i < (wrap ? k : k - 1); ++i) {
            const int j = (i + 1) % k;
            for (int s = 0; s < b; ++s)
                for (int t = 0; t < b; ++t)
                    edges.push_back({i * b + s, j * b + t, 1.0});
        }
        return {Graph(k * b, true, std::move(edges)), detail::block_partition(k, b)};
    }
    throw InputError("unknown fixture '" + name + "'");
}

}  // namespace spectra_cert
