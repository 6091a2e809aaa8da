#pragma once

// Sweep runner: for each sweep value, `trials` seeded instances are
// generated, certified against their ground truth and clustered; trials run
// in parallel on derived seeds, so results are deterministic regardless of
// scheduling. Emits a CSV summary plus one JSON file per sweep point.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "spectra_cert/clustering.hpp"
#include "spectra_cert/config.hpp"
#include "spectra_cert/generators.hpp"
#include "spectra_cert/report.hpp"
#include "spectra_cert/rng.hpp"
#include "spectra_cert/threads.hpp"

namespace spectra_cert {

struct TrialOutcome {
    std::uint64_t seed = 0;
    BoundReport report;
};

struct SweepPoint {
    double value = 0.0;
    std::vector<TrialOutcome> trials;
};

struct SweepResult {
    ExperimentConfig config;
    std::vector<SweepPoint> points;
};

namespace detail {

inline std::vector<std::vector<double>> hierarchy_probability_matrix(double p_in,
                                                                     double p_pair,
                                                                     double p_out) {
    std::vector<std::vector<double>> P(4, std::vector<double>(4, p_out));
    for (int i = 0; i < 4; ++i) P[i][i] = p_in;
    P[0][1] = P[1][0] = P[2][3] = P[3][2] = p_pair;
    return P;
}

// Path- and cycle-structured DSBM matrices: dense connections along the
// chain, F forcing the forward orientation, eps elsewhere.
inline void dsbm_chain_matrices(double eps, bool cycle,
                                std::vector<std::vector<double>>& P,
                                std::vector<std::vector<double>>& F) {
    P.assign(4, std::vector<double>(4, eps));
    F.assign(4, std::vector<double>(4, 0.5));
    for (int i = 0; i < 3; ++i) {
        P[i][i + 1] = P[i + 1][i] = 1.0;
        F[i][i + 1] = 1.0;
        F[i + 1][i] = 0.0;
    }
    if (cycle) {
        P[3][0] = P[0][3] = 1.0;
        F[3][0] = 1.0;
        F[0][3] = 0.0;
    }
}

struct Instance {
    Graph graph;
    Partition truth;
};

inline Instance build_instance(const ExperimentConfig& cfg, double value,
                               std::uint64_t seed) {
    if (cfg.kind == "geometric_sweep") {
        GeometricParams gp;
        const double dy = cfg.param_d("row_separation", 5.0);
        gp.centres = {{0, 0}, {0, dy}, {value, 0}, {value, dy}};
        gp.points_per_centre = cfg.param_i("points", 100);
        gp.std_dev = cfg.param_d("std_dev", 1.0);
        gp.threshold = cfg.param_d("threshold", 4.0);
        auto [g, p] = gen_geometric(gp, seed);
        return {std::move(g), std::move(p)};
    }
    if (cfg.kind == "sbm_hierarchy") {
        SbmParams sp;
        sp.k = 4;
        sp.n = static_cast<int>(std::lround(value));
        sp.P = hierarchy_probability_matrix(cfg.param_d("p_in", 0.5),
                                            cfg.param_d("p_pair", 0.4),
                                            cfg.param_d("p_out", 0.1));
        auto [g, p] = gen_sbm(sp, seed);
        return {std::move(g), std::move(p)};
    }
    if (cfg.kind == "sbm_threshold") {
        // two blocks near the exact-recovery threshold:
        // p = alpha log(N)/N, q = beta log(N)/N with beta the sweep value
        // and alpha = (sqrt(beta) + sqrt(2))^2 unless given.
        SbmParams sp;
        sp.k = 2;
        sp.n = cfg.param_i("n", 500);
        const double N = 2.0 * sp.n;
        const double beta = value;
        const double alpha_default = std::pow(std::sqrt(beta) + std::sqrt(2.0), 2.0);
        const double alpha = cfg.param_d("alpha", alpha_default);
        const double p = alpha * std::log(N) / N;
        const double q = beta * std::log(N) / N;
        if (p > 1.0 || q > 1.0)
            throw InputError("sbm_threshold: probabilities exceed 1 at this sweep value");
        sp.P = {{p, q}, {q, p}};
        auto [g, pt] = gen_sbm(sp, seed);
        return {std::move(g), std::move(pt)};
    }
    if (cfg.kind == "dsbm_path" || cfg.kind == "dsbm_cycle") {
        DsbmParams dp;
        dp.k = 4;
        dp.n = cfg.param_i("n", 100);
        dsbm_chain_matrices(value, cfg.kind == "dsbm_cycle", dp.P, dp.F);
        auto [g, p] = gen_dsbm(dp, seed);
        return {std::move(g), std::move(p)};
    }
    if (cfg.kind == "fixture") {
        const std::string name = cfg.param_s("fixture", "two_clique_matching");
        FixtureParams fp;
        fp.clique_size = cfg.param_i("clique_size", 50);
        fp.match_weight = cfg.param_d("match_weight", 20.0);
        fp.clique_weight = cfg.param_d("clique_weight", 1.0);
        fp.blocks = cfg.param_i("blocks", 5);
        fp.block_size = cfg.param_i("block_size", 5);
        if (cfg.variable == "match_weight") fp.match_weight = value;
        else if (cfg.variable == "block_size") fp.block_size = static_cast<int>(std::lround(value));
        auto [g, p] = fixture(name, fp);
        return {std::move(g), std::move(p)};
    }
    if (cfg.kind == "file") {
        const std::string path = cfg.param_s("path", "");
        if (path.empty()) throw InputError("file experiment needs params path = ...");
        const bool directed = cfg.param_i("directed", 0) != 0;
        Graph g = load_edge_list(path, directed);
        const std::string labels = cfg.param_s("labels", "");
        if (labels.empty())
            throw InputError("file experiment needs params labels = ...");
        Partition p = load_labels(labels, g);
        return {std::move(g), std::move(p)};
    }
    throw InputError("unknown experiment kind '" + cfg.kind + "'");
}

}  // namespace detail

// One generated instance: certification against the ground truth plus the
// spectral-clustering recovery of it.
inline TrialOutcome run_trial(const ExperimentConfig& cfg, double value,
                              std::uint64_t seed) {
    static const std::vector<std::string> kKinds = {
        "geometric_sweep", "sbm_hierarchy", "sbm_threshold", "dsbm_path",
        "dsbm_cycle",      "fixture",       "file"};
    if (std::find(kKinds.begin(), kKinds.end(), cfg.kind) == kKinds.end())
        throw InputError("unknown experiment kind '" + cfg.kind + "'");
    std::optional<detail::Instance> inst;
    for (int attempt = 0;; ++attempt) {
        try {
            inst = detail::build_instance(cfg, value, derive_seed(seed, attempt));
            break;
        } catch (const InputError& e) {
            // isolated-vertex draws and similar; resample deterministically
            if (attempt >= 9) throw;
            std::cerr << "warning: instance draw failed (" << e.what()
                      << "), resampling\n";
        }
    }
    const Graph& g = inst->graph;
    const Partition& truth = inst->truth;
    const int k = truth.k();

    RepresentationKind kind;
    if (cfg.representation == "auto" || cfg.representation.empty())
        kind = g.directed() ? RepresentationKind::normalized_hermitian_laplacian
                            : RepresentationKind::normalized_laplacian;
    else
        kind = representation_from_name(cfg.representation);

    TrialOutcome out;
    out.seed = seed;
    CertifyOptions copts;
    if (!g.directed()) copts.kind = kind;
    if (!cfg.groups.empty()) copts.group_boundaries = cfg.groups;
    out.report = g.directed() ? certify_digraph(g, truth)
                              : certify_undirected(g, truth, copts);

    const auto sc = spectral_cluster(g, k, cfg.k_tilde, kind,
                                     scaling_from_name(cfg.scaling), seed);
    ClusteringInfo ci;
    ci.assignment = sc.partition.assignment();
    ci.objective = sc.kmeans.objective;
    const auto [sd, frac] = evaluate_recovery(g, sc.partition, truth);
    ci.recovery_sym_diff_vol = sd;
    ci.recovery_fraction = frac;
    out.report.clustering = std::move(ci);

    if (!g.directed()) {
        const auto mi = misclassification_inputs(
            g, truth, sc.eigs, sc.embedding, sc.kmeans,
            degree_indicators(g, truth).vectors);
        if (mi.D > 0.0) {
            out.report.misclassification =
                kmeans_misclassification_bound(mi.U, mi.D, mi.alpha, mi.min_cluster_vol);
            out.report.misclassification_inputs_used = mi;
        }
    }

    std::ostringstream desc;
    desc << cfg.kind << " " << cfg.variable << "=" << value << " seed=" << seed;
    out.report.input_description = desc.str();
    return out;
}

inline SweepResult run_experiment(const ExperimentConfig& cfg) {
    SweepResult result;
    result.config = cfg;
    result.points.resize(cfg.values.size());
    for (std::size_t pi = 0; pi < cfg.values.size(); ++pi) {
        SweepPoint& point = result.points[pi];
        point.value = cfg.values[pi];
        point.trials.resize(cfg.trials);
        parallel_for(cfg.trials, [&](int t) {
            const std::uint64_t seed =
                derive_seed(cfg.master_seed, pi * 1000003ull + static_cast<std::uint64_t>(t));
            point.trials[t] = run_trial(cfg, point.value, seed);
        });
    }
    return result;
}

// ---------------------------------------------------------------------------
// Output

namespace detail {

struct Stats {
    int defined = 0;
    double mean = 0.0, stddev = 0.0;
};

inline Stats stats_of(const std::vector<double>& xs) {
    Stats s;
    s.defined = static_cast<int>(xs.size());
    if (xs.empty()) return s;
    for (double x : xs) s.mean += x;
    s.mean /= xs.size();
    for (double x : xs) s.stddev += (x - s.mean) * (x - s.mean);
    s.stddev = std::sqrt(s.stddev / xs.size());
    return s;
}

inline std::string csv_num(double v) {
    if (!std::isfinite(v)) return "NA";
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

}  // namespace detail

// CSV: sweep_value, then mean and std of every bound, the true distance and
// the recovery fraction. Undefined bounds are averaged over the trials where
// they exist; all-undefined cells read NA.
inline std::string sweep_to_csv(const SweepResult& result) {
    const std::vector<std::pair<std::string, std::function<std::optional<double>(
                                                 const BoundReport&)>>>
        metrics = {
            {"thm1", [](const BoundReport& r) { return r.thm1.value; }},
            {"cor2", [](const BoundReport& r) { return r.cor2.value; }},
            {"thm3", [](const BoundReport& r) { return r.thm3.value; }},
            {"cor4", [](const BoundReport& r) { return r.cor4.value; }},
            {"thm5_rayleigh", [](const BoundReport& r) { return r.thm5_rayleigh.value; }},
            {"thm5_psi", [](const BoundReport& r) { return r.thm5_psi.value; }},
            {"laenen_sun", [](const BoundReport& r) { return r.laenen_sun.value; }},
            {"true_distance",
             [](const BoundReport& r) { return std::optional<double>(r.true_distance); }},
            {"recovery_fraction",
             [](const BoundReport& r) {
                 return r.clustering ? r.clustering->recovery_fraction : std::nullopt;
             }},
        };
    std::ostringstream out;
    out << "sweep_value";
    for (const auto& [name, _] : metrics) out << "," << name << "_mean," << name << "_std";
    out << "\n";
    for (const auto& point : result.points) {
        out << detail::csv_num(point.value);
        for (const auto& [name, get] : metrics) {
            std::vector<double> xs;
            for (const auto& trial : point.trials)
                if (auto v = get(trial.report); v && std::isfinite(*v)) xs.push_back(*v);
            const auto s = detail::stats_of(xs);
            if (s.defined == 0)
                out << ",NA,NA";
            else
                out << "," << detail::csv_num(s.mean) << "," << detail::csv_num(s.stddev);
        }
        out << "\n";
    }
    return out.str();
}

inline nlohmann::json sweep_point_to_json(const SweepPoint& point) {
    nlohmann::json trials = nlohmann::json::array();
    for (const auto& t : point.trials) {
        nlohmann::json j = report_to_json(t.report);
        j["input"]["seed"] = t.seed;
        trials.push_back(std::move(j));
    }
    return {{"spec_version", kReportSchemaVersion},
            {"sweep_value", point.value},
            {"trials", std::move(trials)}};
}

// Writes <prefix>.csv and <prefix>_point_<i>.json.
inline void write_sweep_outputs(const SweepResult& result, const std::string& prefix) {
    {
        std::ofstream csv(prefix + ".csv");
        if (!csv) throw InputError("cannot write " + prefix + ".csv");
        csv << sweep_to_csv(result);
    }
    for (std::size_t i = 0; i < result.points.size(); ++i) {
        const std::string path = prefix + "_point_" + std::to_string(i) + ".json";
        std::ofstream js(path);
        if (!js) throw InputError("cannot write " + path);
        js << sweep_point_to_json(result.points[i]).dump(2) << "\n";
    }
}

}  // namespace spectra_cert
