#include <catch2/catch_amalgamated.hpp>

#include <set>

#include "spectra_cert/bounds.hpp"
#include "spectra_cert/clustering.hpp"
#include "spectra_cert/generators.hpp"
#include "spectra_cert/kmeans.hpp"
#include "test_util.hpp"

using namespace spectra_cert;
using Catch::Approx;

namespace {

Embedding make_embedding(const std::vector<std::pair<double, double>>& pts,
                         const std::vector<double>& w) {
    Embedding e;
    e.points.resize(static_cast<int>(pts.size()), 1);
    e.weights.resize(static_cast<int>(w.size()));
    for (std::size_t i = 0; i < pts.size(); ++i) {
        e.points(static_cast<int>(i), 0) = std::complex<double>(pts[i].first, pts[i].second);
        e.weights(static_cast<int>(i)) = w[i];
    }
    return e;
}

// exhaustive weighted k-means over all 2^n assignments, centroids optimal
double brute_force_kmeans2(const Embedding& e) {
    const int n = static_cast<int>(e.points.rows());
    double best = std::numeric_limits<double>::infinity();
    for (unsigned mask = 1; mask + 1 < (1u << n); ++mask) {
        std::vector<int> assign(n);
        for (int i = 0; i < n; ++i) assign[i] = (mask >> i) & 1;
        best = std::min(best, assignment_objective(e, assign, 2));
    }
    return best;
}

}  // namespace

TEST_CASE("weighted k-means") {
    test_util::Rng rng(61);

    SECTION("k = N puts every point in its own cluster with zero objective") {
        std::vector<std::pair<double, double>> pts;
        std::vector<double> w;
        for (int i = 0; i < 6; ++i) {
            pts.push_back({static_cast<double>(i), 0.5 * i});
            w.push_back(1.0 + i);
        }
        const auto r = weighted_kmeans(make_embedding(pts, w), 6, 5, 1);
        CHECK(r.objective == Approx(0.0).margin(1e-12));
        std::set<int> used(r.assignment.begin(), r.assignment.end());
        CHECK(used.size() == 6);
    }
    SECTION("k = 1 recovers the weighted mean and variance") {
        std::vector<std::pair<double, double>> pts = {{0, 0}, {2, 1}, {4, -1}, {1, 3}};
        std::vector<double> w = {1, 2, 3, 4};
        const auto e = make_embedding(pts, w);
        const auto r = weighted_kmeans(e, 1, 3, 1);
        double wx = 0, wy = 0, tot = 0;
        for (std::size_t i = 0; i < pts.size(); ++i) {
            wx += w[i] * pts[i].first;
            wy += w[i] * pts[i].second;
            tot += w[i];
        }
        CHECK(r.centroids(0, 0).real() == Approx(wx / tot).margin(1e-10));
        CHECK(r.centroids(0, 0).imag() == Approx(wy / tot).margin(1e-10));
        double var = 0;
        for (std::size_t i = 0; i < pts.size(); ++i) {
            const double dx = pts[i].first - wx / tot, dy = pts[i].second - wy / tot;
            var += w[i] * (dx * dx + dy * dy);
        }
        CHECK(r.objective == Approx(var).margin(1e-10));
    }
    SECTION("well-separated clouds recovered exactly, objective optimal for small n") {
        std::vector<std::pair<double, double>> pts;
        std::vector<double> w;
        for (int i = 0; i < 5; ++i) {
            pts.push_back({0.01 * i, 0.0});
            w.push_back(1.0 + 0.3 * i);
        }
        for (int i = 0; i < 5; ++i) {
            pts.push_back({10.0 + 0.01 * i, 1.0});
            w.push_back(2.0 - 0.2 * i);
        }
        const auto e = make_embedding(pts, w);
        const auto r = weighted_kmeans(e, 2, 5, 7);
        for (int i = 0; i < 5; ++i) CHECK(r.assignment[i] == r.assignment[0]);
        for (int i = 5; i < 10; ++i) CHECK(r.assignment[i] == r.assignment[5]);
        CHECK(r.assignment[0] != r.assignment[5]);
        CHECK(r.objective == Approx(brute_force_kmeans2(e)).epsilon(1e-9));
    }
    SECTION("objective is recomputable from assignment and centroids") {
        std::vector<std::pair<double, double>> pts;
        std::vector<double> w;
        for (int i = 0; i < 40; ++i) {
            pts.push_back({rng.gaussian(), rng.gaussian()});
            w.push_back(0.5 + rng.uniform01());
        }
        const auto e = make_embedding(pts, w);
        const auto r = weighted_kmeans(e, 3, 8, 11);
        double recomputed = 0.0;
        for (int i = 0; i < 40; ++i)
            recomputed +=
                e.weights(i) *
                (e.points.row(i) - r.centroids.row(r.assignment[i])).squaredNorm();
        CHECK(recomputed == Approx(r.objective).epsilon(1e-9));
    }
    SECTION("deterministic given the seed") {
        std::vector<std::pair<double, double>> pts;
        std::vector<double> w;
        for (int i = 0; i < 30; ++i) {
            pts.push_back({rng.gaussian(), rng.gaussian()});
            w.push_back(1.0);
        }
        const auto e = make_embedding(pts, w);
        const auto a = weighted_kmeans(e, 4, 6, 99);
        const auto b = weighted_kmeans(e, 4, 6, 99);
        CHECK(a.assignment == b.assignment);
        CHECK(a.objective == b.objective);
    }
    SECTION("k > N rejected") {
        CHECK_THROWS_AS(weighted_kmeans(make_embedding({{0, 0}}, {1.0}), 2, 1, 1),
                        InputError);
    }
}

TEST_CASE("spectral clustering") {
    SECTION("two disjoint cliques: exact recovery") {
        std::vector<Edge> edges;
        for (int s = 0; s < 2; ++s)
            for (int i = 0; i < 5; ++i)
                for (int j = i + 1; j < 5; ++j) edges.push_back({5 * s + i, 5 * s + j, 1.0});
        Graph g(10, false, std::move(edges));
        Partition truth(2, {0, 0, 0, 0, 0, 1, 1, 1, 1, 1});
        const auto r = spectral_cluster(g, 2, 0, RepresentationKind::normalized_laplacian,
                                        EmbeddingScaling::cluster_constant, 3);
        CHECK(symmetric_difference_volume(g, r.partition, truth) == 0.0);
    }
    SECTION("two-clique fixture: spectral clustering splits the cliques") {
        auto [g, truth] = fixture("two_clique_matching");
        for (const auto scaling :
             {EmbeddingScaling::cluster_constant, EmbeddingScaling::paper_literal}) {
            const auto r = spectral_cluster(g, 2, 0, RepresentationKind::normalized_laplacian,
                                            scaling, 5);
            CHECK(symmetric_difference_volume(g, r.partition, truth) == 0.0);
        }
    }
    SECTION("perfect cycle digraph, one eigenvector: exact recovery of 5 clusters") {
        auto [g, truth] = fixture("perfect_cycle");
        const auto r =
            spectral_cluster(g, 5, 1, RepresentationKind::normalized_hermitian_laplacian,
                             EmbeddingScaling::cluster_constant, 7);
        const auto [sd, frac] = evaluate_recovery(g, r.partition, truth);
        CHECK(sd == 0.0);
        CHECK(frac == 0.0);
    }
    SECTION("deterministic given the seed") {
        auto [g, truth] = fixture("two_clique_matching", {.clique_size = 12});
        const auto a = spectral_cluster(g, 2, 0, RepresentationKind::normalized_laplacian,
                                        EmbeddingScaling::cluster_constant, 17);
        const auto b = spectral_cluster(g, 2, 0, RepresentationKind::normalized_laplacian,
                                        EmbeddingScaling::cluster_constant, 17);
        CHECK(a.partition.assignment() == b.partition.assignment());
    }
}

TEST_CASE("recovery evaluation") {
    test_util::Rng rng(67);
    const Graph g = test_util::random_undirected(rng, 12, 0.5, true);
    const Partition p = test_util::random_partition(rng, 12, 3);

    SECTION("identical partitions") {
        const auto [sd, frac] = evaluate_recovery(g, p, p);
        CHECK(sd == 0.0);
        CHECK(frac == 0.0);
    }
    SECTION("one moved vertex costs 2 d(u)") {
        std::vector<int> moved = p.assignment();
        moved[4] = (moved[4] + 1) % 3;
        if (Partition(3, moved).cluster_members(p.cluster_of(4)).empty()) return;
        const auto [sd, frac] = evaluate_recovery(g, Partition(3, moved), p);
        CHECK(sd == Approx(2.0 * g.degree(4)));
        CHECK(frac == Approx(2.0 * g.degree(4) / g.volume()));
    }
    SECTION("random relabelling is free") {
        std::vector<int> relabelled(12);
        for (int u = 0; u < 12; ++u) relabelled[u] = (p.cluster_of(u) + 2) % 3;
        const auto [sd, frac] = evaluate_recovery(g, Partition(3, relabelled), p);
        CHECK(sd == 0.0);
    }
}

TEST_CASE("misclassification chain on a well-separated model") {
    // SBM with a strong gap: the lemma's precondition holds and the measured
    // symmetric difference respects the bound computed from measured inputs.
    SbmParams sp;
    sp.k = 2;
    sp.n = 40;
    sp.P = {{0.9, 0.05}, {0.05, 0.9}};
    int applicable_seen = 0;
    for (int seed = 0; seed < 5; ++seed) {
        auto [g, truth] = gen_sbm(sp, 500 + seed);
        const auto sc = spectral_cluster(g, 2, 0, RepresentationKind::normalized_laplacian,
                                         EmbeddingScaling::paper_literal, seed);
        const auto mi = misclassification_inputs(g, truth, sc.eigs, sc.embedding, sc.kmeans,
                                                 degree_indicators(g, truth).vectors);
        REQUIRE(mi.D > 0.0);
        const auto mb = kmeans_misclassification_bound(mi.U, mi.D, mi.alpha,
                                                       mi.min_cluster_vol);
        const auto [sd, frac] = evaluate_recovery(g, sc.partition, truth);
        if (mb.applicable) {
            ++applicable_seen;
            CHECK(sd <= mb.bound + 1e-9);
        }
    }
    CHECK(applicable_seen > 0);
}
