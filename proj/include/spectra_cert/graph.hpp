#pragma once

// Graph data model, edge-list / label-file ingestion and the combinatorial
// quantities everything else is built on: degrees, volumes, cuts,
// conductance, k-way expansion, cyclic expansion, the path objective and
// the symmetric-difference volume between partitions.

#include <algorithm>
#include <bit>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <sstream>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "spectra_cert/errors.hpp"

namespace spectra_cert {

struct Edge {
    int u = 0;
    int v = 0;
    double w = 1.0;
};

// Weighted graph, undirected or directed. Undirected edges are stored once
// with u < v. For a directed graph at most one of (u,v), (v,u) may exist.
// Every vertex must end up with positive degree: the normalised Laplacians
// need D^{+-1/2}, so degree-0 vertices are rejected at construction.
class Graph {
public:
    Graph(int n_vertices, bool directed, std::vector<Edge> edges,
          std::vector<std::string> vertex_labels = {})
        : n_(n_vertices), directed_(directed), edges_(std::move(edges)),
          labels_(std::move(vertex_labels)) {
        if (n_ <= 0) throw InputError("graph needs at least one vertex");
        if (!labels_.empty() && static_cast<int>(labels_.size()) != n_)
            throw InputError("vertex label count does not match vertex count");
        degree_.assign(n_, 0.0);
        std::unordered_set<std::int64_t> seen;
        seen.reserve(edges_.size() * 2);
        for (auto& e : edges_) {
            if (e.u < 0 || e.u >= n_ || e.v < 0 || e.v >= n_)
                throw InputError("edge endpoint out of range");
            if (e.u == e.v) throw InputError("self-loop on vertex " + vertex_name(e.u));
            if (e.w < 0.0) throw InputError("negative edge weight");
            if (!directed_ && e.u > e.v) std::swap(e.u, e.v);
            const std::int64_t key = static_cast<std::int64_t>(e.u) * n_ + e.v;
            const std::int64_t rkey = static_cast<std::int64_t>(e.v) * n_ + e.u;
            if (seen.count(key))
                throw InputError("duplicate edge " + vertex_name(e.u) + " -> " + vertex_name(e.v));
            if (directed_ && seen.count(rkey))
                throw InputError("anti-parallel edge pair between " + vertex_name(e.u) +
                                 " and " + vertex_name(e.v));
            seen.insert(key);
            degree_[e.u] += e.w;  // directed: d = d_in + d_out
            degree_[e.v] += e.w;
        }
        for (int u = 0; u < n_; ++u)
            if (degree_[u] <= 0.0)
                throw InputError("isolated vertex " + vertex_name(u) +
                                 " (degree 0 unsupported: D^{-1/2} undefined)");
        volume_ = std::accumulate(degree_.begin(), degree_.end(), 0.0);
    }

    int size() const { return n_; }
    bool directed() const { return directed_; }
    const std::vector<Edge>& edges() const { return edges_; }
    double degree(int u) const { return degree_[u]; }
    const std::vector<double>& degrees() const { return degree_; }
    double volume() const { return volume_; }
    bool has_labels() const { return !labels_.empty(); }
    const std::vector<std::string>& labels() const { return labels_; }

    std::string vertex_name(int u) const {
        return labels_.empty() ? std::to_string(u) : labels_[u];
    }

private:
    int n_;
    bool directed_;
    std::vector<Edge> edges_;
    std::vector<std::string> labels_;
    std::vector<double> degree_;
    double volume_ = 0.0;
};

// A k-way disjoint cover of the vertex set; every cluster nonempty.
class Partition {
public:
    Partition(int k, std::vector<int> assignment)
        : k_(k), assign_(std::move(assignment)) {
        if (k_ < 1) throw InputError("partition needs k >= 1");
        std::vector<int> count(k_, 0);
        for (int c : assign_) {
            if (c < 0 || c >= k_) throw InputError("cluster index out of range");
            ++count[c];
        }
        for (int c = 0; c < k_; ++c)
            if (count[c] == 0)
                throw InputError("empty cluster " + std::to_string(c));
    }

    int k() const { return k_; }
    int size() const { return static_cast<int>(assign_.size()); }
    int cluster_of(int u) const { return assign_[u]; }
    const std::vector<int>& assignment() const { return assign_; }

    std::vector<int> cluster_members(int c) const {
        std::vector<int> out;
        for (int u = 0; u < size(); ++u)
            if (assign_[u] == c) out.push_back(u);
        return out;
    }

private:
    int k_;
    std::vector<int> assign_;
};

inline double volume(const Graph& g, const std::vector<int>& vertices) {
    double v = 0.0;
    for (int u : vertices) v += g.degree(u);
    return v;
}

// Phi(S) = w(S, V-S) / vol(S). For undirected graphs each boundary edge is
// counted once in the cut; for digraphs only edges leaving S count.
inline double conductance(const Graph& g, const std::vector<int>& s) {
    if (s.empty()) throw InputError("conductance of empty set");
    std::vector<char> in(g.size(), 0);
    int members = 0;
    for (int u : s) {
        if (u < 0 || u >= g.size()) throw InputError("vertex out of range");
        if (!in[u]) ++members;
        in[u] = 1;
    }
    if (members == g.size()) throw InputError("conductance of the full vertex set");
    double cut = 0.0, vol = 0.0;
    for (const auto& e : g.edges()) {
        if (in[e.u] && !in[e.v]) cut += e.w;
        if (!g.directed() && !in[e.u] && in[e.v]) cut += e.w;
    }
    for (int u = 0; u < g.size(); ++u)
        if (in[u]) vol += g.degree(u);
    if (vol <= 0.0) throw InputError("conductance of a zero-volume set");
    return cut / vol;
}

namespace detail {

struct ClusterCuts {
    std::vector<double> cut;  // weight leaving each cluster
    std::vector<double> vol;
};

inline ClusterCuts cluster_cuts(const Graph& g, const Partition& p) {
    if (p.size() != g.size()) throw InputError("partition size does not match graph");
    ClusterCuts cc;
    cc.cut.assign(p.k(), 0.0);
    cc.vol.assign(p.k(), 0.0);
    for (const auto& e : g.edges()) {
        const int cu = p.cluster_of(e.u), cv = p.cluster_of(e.v);
        if (cu != cv) {
            cc.cut[cu] += e.w;
            if (!g.directed()) cc.cut[cv] += e.w;
        }
    }
    for (int u = 0; u < g.size(); ++u) cc.vol[p.cluster_of(u)] += g.degree(u);
    return cc;
}

// w(S_i, S_j) for all ordered cluster pairs (directed edge u->v counts once
// towards the pair (cluster(u), cluster(v)); undirected edges count both ways).
inline std::vector<std::vector<double>> pair_cut_matrix(const Graph& g, const Partition& p) {
    if (p.size() != g.size()) throw InputError("partition size does not match graph");
    std::vector<std::vector<double>> w(p.k(), std::vector<double>(p.k(), 0.0));
    for (const auto& e : g.edges()) {
        w[p.cluster_of(e.u)][p.cluster_of(e.v)] += e.w;
        if (!g.directed()) w[p.cluster_of(e.v)][p.cluster_of(e.u)] += e.w;
    }
    return w;
}

}  // namespace detail

// max_i Phi(S_i); with a clustering output this is the rho-tilde surrogate
// for the k-way expansion constant.
inline double kway_expansion(const Graph& g, const Partition& p) {
    const auto cc = detail::cluster_cuts(g, p);
    double worst = 0.0;
    for (int c = 0; c < p.k(); ++c) {
        if (cc.vol[c] <= 0.0)
            throw InputError("zero-volume cluster " + std::to_string(c));
        worst = std::max(worst, cc.cut[c] / cc.vol[c]);
    }
    return worst;
}

// Psi(S_1..S_k) = (1/vol(V)) * sum of edge weight not following the cyclic
// pattern S_i -> S_{i+1 mod k}. Intra-cluster edges are penalised.
inline double cyclic_expansion(const Graph& g, const Partition& p) {
    if (!g.directed()) throw InputError("cyclic expansion needs a digraph");
    if (p.k() < 2) throw InputError("cyclic expansion needs k >= 2");
    if (p.size() != g.size()) throw InputError("partition size does not match graph");
    double bad = 0.0;
    for (const auto& e : g.edges()) {
        const int cu = p.cluster_of(e.u), cv = p.cluster_of(e.v);
        if ((cu + 1) % p.k() != cv) bad += e.w;
    }
    return bad / g.volume();
}

// sum_{i=1}^{k-1} w(S_i, S_{i+1}) / (vol(S_i) + vol(S_{i+1})), evaluated at
// the supplied partition order (the max over partitions is NP-hard).
inline double theta_k(const Graph& g, const Partition& p) {
    if (!g.directed()) throw InputError("theta_k needs a digraph");
    const auto w = detail::pair_cut_matrix(g, p);
    const auto cc = detail::cluster_cuts(g, p);
    double total = 0.0;
    for (int i = 0; i + 1 < p.k(); ++i) {
        const double denom = cc.vol[i] + cc.vol[i + 1];
        if (denom <= 0.0)
            throw InputError("zero combined volume for clusters " + std::to_string(i) +
                             "," + std::to_string(i + 1));
        total += w[i][i + 1] / denom;
    }
    return total;
}

namespace detail {

// Exact max-weight assignment on a k x k score matrix, O(2^k * k) subset DP.
inline double best_assignment(const std::vector<std::vector<double>>& score) {
    const int k = static_cast<int>(score.size());
    const std::size_t full = std::size_t(1) << k;
    std::vector<double> dp(full, -1.0);
    dp[0] = 0.0;
    for (std::size_t mask = 0; mask + 1 < full; ++mask) {
        if (dp[mask] < 0.0) continue;
        const int row = std::popcount(mask);  // rows 0..row-1 already assigned
        for (int col = 0; col < k; ++col) {
            if (mask & (std::size_t(1) << col)) continue;
            const std::size_t next = mask | (std::size_t(1) << col);
            dp[next] = std::max(dp[next], dp[mask] + score[row][col]);
        }
    }
    return dp[full - 1];
}

}  // namespace detail

// Degree-weighted disagreement between two k-way partitions, minimised over
// cluster relabellings. For k <= 8 all permutations are enumerated; larger k
// uses an exact assignment on the overlap-volume matrix (equivalent, since
// the objective is a sum of per-pair terms).
inline double symmetric_difference_volume(const Graph& g, const Partition& p,
                                          const Partition& q) {
    if (p.k() != q.k()) throw InputError("partitions have different k");
    if (p.size() != g.size() || q.size() != g.size())
        throw InputError("partition size does not match graph");
    const int k = p.k();
    std::vector<std::vector<double>> overlap(k, std::vector<double>(k, 0.0));
    for (int u = 0; u < g.size(); ++u)
        overlap[p.cluster_of(u)][q.cluster_of(u)] += g.degree(u);
    // summing the overlap cells (rather than reusing the cached volume)
    // keeps identical partitions at exactly zero
    double total = 0.0;
    for (int i = 0; i < k; ++i)
        for (int j = 0; j < k; ++j) total += overlap[i][j];

    double best = 0.0;
    if (k <= 8) {
        std::vector<int> perm(k);
        std::iota(perm.begin(), perm.end(), 0);
        do {
            double s = 0.0;
            for (int i = 0; i < k; ++i) s += overlap[i][perm[i]];
            best = std::max(best, s);
        } while (std::next_permutation(perm.begin(), perm.end()));
    } else {
        best = detail::best_assignment(overlap);
    }
    return std::max(0.0, 2.0 * (total - best));
}

// ---------------------------------------------------------------------------
// File formats. Edge list: "u v [w]" per line, whitespace separated, weight
// defaults to 1; labels: "vertex_name cluster_index" per line. '#' starts a
// comment in both.

namespace detail {

inline std::string strip_comment(const std::string& line) {
    const auto pos = line.find('#');
    std::string out = pos == std::string::npos ? line : line.substr(0, pos);
    while (!out.empty() && (out.back() == '\r' || out.back() == '\n')) out.pop_back();
    return out;
}

inline bool parse_weight(const std::string& tok, double& out) {
    std::size_t used = 0;
    try {
        out = std::stod(tok, &used);
    } catch (const std::exception&) {
        return false;
    }
    return used == tok.size();
}

}  // namespace detail

// Vertices are renumbered densely in first-appearance order; original names
// are kept as vertex labels.
inline Graph load_edge_list(const std::string& path, bool directed) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open edge list: " + path);
    std::unordered_map<std::string, int> ids;
    std::vector<std::string> names;
    std::vector<Edge> edges;
    std::string line;
    int lineno = 0;
    auto intern = [&](const std::string& name) {
        auto [it, fresh] = ids.try_emplace(name, static_cast<int>(names.size()));
        if (fresh) names.push_back(name);
        return it->second;
    };
    while (std::getline(in, line)) {
        ++lineno;
        std::istringstream ss(detail::strip_comment(line));
        std::string a, b, c, extra;
        if (!(ss >> a)) continue;  // blank or comment-only
        if (!(ss >> b) || (ss >> c && ss >> extra))
            throw InputError(path + ":" + std::to_string(lineno) +
                             ": expected 'u v [w]'");
        double w = 1.0;
        if (!c.empty() && !detail::parse_weight(c, w))
            throw InputError(path + ":" + std::to_string(lineno) +
                             ": bad weight '" + c + "'");
        if (w < 0.0)
            throw InputError(path + ":" + std::to_string(lineno) + ": negative weight");
        if (a == b)
            throw InputError(path + ":" + std::to_string(lineno) + ": self-loop");
        edges.push_back({intern(a), intern(b), w});
    }
    if (names.empty()) throw InputError(path + ": no edges found");
    const int n = static_cast<int>(names.size());
    return Graph(n, directed, std::move(edges), std::move(names));
}

// Ground-truth labels; every graph vertex must be assigned exactly once.
// Cluster values are renumbered densely, preserving their sorted order.
inline Partition load_labels(const std::string& path, const Graph& g) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open label file: " + path);
    std::unordered_map<std::string, int> ids;
    for (int u = 0; u < g.size(); ++u) ids[g.vertex_name(u)] = u;
    std::vector<int> raw(g.size(), -1);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        std::istringstream ss(detail::strip_comment(line));
        std::string name, cluster, extra;
        if (!(ss >> name)) continue;
        if (!(ss >> cluster) || (ss >> extra))
            throw InputError(path + ":" + std::to_string(lineno) +
                             ": expected 'vertex_name cluster_index'");
        auto it = ids.find(name);
        if (it == ids.end())
            throw InputError(path + ":" + std::to_string(lineno) +
                             ": unknown vertex '" + name + "'");
        int c = 0;
        try {
            c = std::stoi(cluster);
        } catch (const std::exception&) {
            throw InputError(path + ":" + std::to_string(lineno) +
                             ": bad cluster index '" + cluster + "'");
        }
        if (raw[it->second] != -1)
            throw InputError(path + ":" + std::to_string(lineno) +
                             ": vertex '" + name + "' labelled twice");
        raw[it->second] = c;
    }
    std::vector<int> distinct;
    for (int u = 0; u < g.size(); ++u) {
        if (raw[u] == -1)
            throw InputError(path + ": vertex '" + g.vertex_name(u) + "' has no label");
        distinct.push_back(raw[u]);
    }
    std::sort(distinct.begin(), distinct.end());
    distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
    std::unordered_map<int, int> dense;
    for (std::size_t i = 0; i < distinct.size(); ++i) dense[distinct[i]] = static_cast<int>(i);
    std::vector<int> assign(g.size());
    for (int u = 0; u < g.size(); ++u) assign[u] = dense[raw[u]];
    return Partition(static_cast<int>(distinct.size()), std::move(assign));
}

inline void write_edge_list(const Graph& g, std::ostream& out) {
    char buf[64];
    for (const auto& e : g.edges()) {
        std::snprintf(buf, sizeof(buf), "%.17g", e.w);
        out << g.vertex_name(e.u) << ' ' << g.vertex_name(e.v) << ' ' << buf << '\n';
    }
}

inline void write_labels(const Graph& g, const Partition& p, std::ostream& out) {
    for (int u = 0; u < g.size(); ++u)
        out << g.vertex_name(u) << ' ' << p.cluster_of(u) << '\n';
}

}  // namespace spectra_cert
