// spectra-cert: certify spectral clustering quality on graphs.
//
// Subcommands:
//   analyze    load or synthesise one graph, cluster it, compute every
//              applicable bound and the exact subspace distances
//   experiment run a seeded sweep from a config file, emit CSV + JSON
//   generate   write a synthetic graph (edge list + ground-truth labels)
//
// Exit codes: 0 success, 1 input/parse errors, 2 numerical failures.

#include <CLI11.hpp>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "spectra_cert/clustering.hpp"
#include "spectra_cert/experiment.hpp"
#include "spectra_cert/generators.hpp"
#include "spectra_cert/graph.hpp"
#include "spectra_cert/report.hpp"

namespace sc = spectra_cert;

namespace {

constexpr int kDefaultVertexCap = 5000;

struct AnalyzeArgs {
    std::string graph_path;
    std::string labels_path;
    std::string fixture_name;
    bool directed = false;
    int k = 2;
    int k_tilde = 0;
    std::string representation = "auto";
    std::string scaling = "cluster_constant";
    std::string groups;
    std::uint64_t seed = 0;
    std::string out;
    std::string format = "json";
    bool allow_large = false;
    int clique_size = 50;
    double match_weight = 20.0;
    double clique_weight = 1.0;
    int blocks = 5;
    int block_size = 5;
    int restarts = 10;
};

std::vector<int> parse_groups(const std::string& s, int k) {
    std::vector<int> bnd{0};
    std::istringstream ss(s);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        if (tok.empty()) continue;
        bnd.push_back(std::stoi(tok));
    }
    if (bnd.back() != k) bnd.push_back(k);
    return bnd;
}

void emit_text(const std::string& text, const std::string& out) {
    if (out.empty()) {
        std::cout << text;
    } else {
        std::ofstream f(out);
        if (!f) throw sc::InputError("cannot write " + out);
        f << text;
    }
}

int run_analyze(const AnalyzeArgs& a) {
    std::optional<sc::Graph> graph;
    std::optional<sc::Partition> fixture_truth;
    std::string description;
    if (!a.fixture_name.empty()) {
        sc::FixtureParams fp;
        fp.clique_size = a.clique_size;
        fp.match_weight = a.match_weight;
        fp.clique_weight = a.clique_weight;
        fp.blocks = a.blocks;
        fp.block_size = a.block_size;
        auto [g, p] = sc::fixture(a.fixture_name, fp);
        graph = std::move(g);
        fixture_truth = std::move(p);
        description = "fixture:" + a.fixture_name;
    } else {
        graph = sc::load_edge_list(a.graph_path, a.directed);
        description = a.graph_path;
    }
    const sc::Graph& g = *graph;
    if (g.size() > kDefaultVertexCap && !a.allow_large)
        throw sc::InputError("graph has " + std::to_string(g.size()) +
                             " vertices; dense eigensolver cap is " +
                             std::to_string(kDefaultVertexCap) +
                             " (use --allow-large to override)");

    int k = a.k;
    std::optional<sc::Partition> truth;
    if (!a.labels_path.empty()) truth = sc::load_labels(a.labels_path, g);
    else if (fixture_truth) truth = fixture_truth;
    if (truth && a.k <= 0) k = truth->k();
    if (k < 1) throw sc::InputError("need --k >= 1");

    sc::RepresentationKind kind;
    if (a.representation == "auto")
        kind = g.directed() ? sc::RepresentationKind::normalized_hermitian_laplacian
                            : sc::RepresentationKind::normalized_laplacian;
    else
        kind = sc::representation_from_name(a.representation);

    const auto scr = sc::spectral_cluster(g, k, a.k_tilde, kind,
                                          sc::scaling_from_name(a.scaling), a.seed,
                                          a.restarts);

    sc::CertifyOptions copts;
    if (!g.directed()) copts.kind = kind;
    if (!a.groups.empty()) copts.group_boundaries = parse_groups(a.groups, k);

    auto certify = [&](const sc::Partition& p) {
        return g.directed() ? sc::certify_digraph(g, p)
                            : sc::certify_undirected(g, p, copts);
    };

    sc::BoundReport report = certify(scr.partition);
    report.input_description = description + " (clusters: spectral)";
    sc::ClusteringInfo ci;
    ci.assignment = scr.partition.assignment();
    ci.objective = scr.kmeans.objective;
    if (truth && truth->k() != k)
        std::cerr << "note: label file has " << truth->k() << " clusters but k = " << k
                  << "; recovery not comparable, reporting the reference clusters only\n";
    if (truth && truth->k() == k) {
        const auto [sd, frac] = sc::evaluate_recovery(g, scr.partition, *truth);
        ci.recovery_sym_diff_vol = sd;
        ci.recovery_fraction = frac;
        if (!g.directed()) {
            const auto mi = sc::misclassification_inputs(
                g, *truth, scr.eigs, scr.embedding, scr.kmeans,
                sc::degree_indicators(g, *truth).vectors);
            if (mi.D > 0.0) {
                report.misclassification = sc::kmeans_misclassification_bound(
                    mi.U, mi.D, mi.alpha, mi.min_cluster_vol);
                report.misclassification_inputs_used = mi;
            }
        }
    }
    report.clustering = std::move(ci);

    if (a.format == "csv") {
        emit_text(sc::report_to_csv(report), a.out);
        return 0;
    }
    if (a.format != "json") throw sc::InputError("unknown format '" + a.format + "'");
    nlohmann::json j = sc::report_to_json(report);
    j["input"]["seed"] = a.seed;
    j["input"]["num_eigenvectors"] = a.k_tilde > 0 ? a.k_tilde : (g.directed() ? 1 : k);
    j["input"]["scaling"] = a.scaling;
    if (truth) {
        sc::BoundReport ref = certify(*truth);
        ref.input_description = description + " (clusters: ground truth)";
        j["ground_truth"] = sc::report_to_json(ref);
    }
    emit_text(j.dump(2) + "\n", a.out);
    return 0;
}

int run_generate(const std::string& kind, const sc::ExperimentConfig& params,
                 std::uint64_t seed, const std::string& out_path) {
    std::optional<std::pair<sc::Graph, sc::Partition>> made;
    if (kind == "sbm") {
        sc::SbmParams sp;
        sp.k = params.param_i("k", 2);
        sp.n = params.param_i("n", 50);
        const double p_in = params.param_d("p_in", 0.5);
        const double p_out = params.param_d("p_out", 0.1);
        sp.P.assign(sp.k, std::vector<double>(sp.k, p_out));
        for (int i = 0; i < sp.k; ++i) sp.P[i][i] = p_in;
        made = sc::gen_sbm(sp, seed);
    } else if (kind == "dsbm") {
        sc::DsbmParams dp;
        dp.k = params.param_i("k", 4);
        dp.n = params.param_i("n", 100);
        const double eps = params.param_d("eps", 0.05);
        const bool cycle = params.param_i("cycle", 0) != 0;
        dp.P.assign(dp.k, std::vector<double>(dp.k, eps));
        dp.F.assign(dp.k, std::vector<double>(dp.k, 0.5));
        for (int i = 0; i + 1 < dp.k; ++i) {
            dp.P[i][i + 1] = dp.P[i + 1][i] = 1.0;
            dp.F[i][i + 1] = 1.0;
            dp.F[i + 1][i] = 0.0;
        }
        if (cycle) {
            dp.P[dp.k - 1][0] = dp.P[0][dp.k - 1] = 1.0;
            dp.F[dp.k - 1][0] = 1.0;
            dp.F[0][dp.k - 1] = 0.0;
        }
        made = sc::gen_dsbm(dp, seed);
    } else if (kind == "geometric") {
        sc::GeometricParams gp;
        const double d = params.param_d("d", 8.0);
        const double dy = params.param_d("row_separation", 5.0);
        gp.centres = {{0, 0}, {0, dy}, {d, 0}, {d, dy}};
        gp.points_per_centre = params.param_i("points", 100);
        gp.std_dev = params.param_d("std_dev", 1.0);
        gp.threshold = params.param_d("threshold", 4.0);
        made = sc::gen_geometric(gp, seed);
    } else if (kind == "fixture") {
        sc::FixtureParams fp;
        fp.clique_size = params.param_i("clique_size", 50);
        fp.match_weight = params.param_d("match_weight", 20.0);
        fp.clique_weight = params.param_d("clique_weight", 1.0);
        fp.blocks = params.param_i("blocks", 5);
        fp.block_size = params.param_i("block_size", 5);
        made = sc::fixture(params.param_s("name", "two_clique_matching"), fp);
    } else {
        throw sc::InputError("unknown generator kind '" + kind + "'");
    }

    const auto& [g, p] = *made;
    {
        std::ofstream f(out_path + ".edges");
        if (!f) throw sc::InputError("cannot write " + out_path + ".edges");
        sc::write_edge_list(g, f);
    }
    {
        std::ofstream f(out_path + ".labels");
        if (!f) throw sc::InputError("cannot write " + out_path + ".labels");
        sc::write_labels(g, p, f);
    }
    std::cout << "wrote " << out_path << ".edges (" << g.size() << " vertices, "
              << g.edges().size() << (g.directed() ? " directed" : "") << " edges) and "
              << out_path << ".labels\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"spectral clustering certification toolkit"};
    app.require_subcommand(1);

    AnalyzeArgs aa;
    auto* analyze = app.add_subcommand("analyze", "certify clusters of one graph");
    analyze->add_option("graph", aa.graph_path, "edge-list file (u v [w] per line)");
    analyze->add_option("--labels", aa.labels_path, "ground-truth labels file");
    analyze->add_option("--fixture", aa.fixture_name,
                        "built-in fixture instead of a file "
                        "(two_clique_matching, perfect_cycle, perfect_path)");
    analyze->add_flag("--directed", aa.directed, "treat the edge list as directed");
    analyze->add_option("--k", aa.k, "number of clusters");
    analyze->add_option("--k-tilde", aa.k_tilde,
                        "eigenvectors in the embedding (default: k undirected, 1 directed)");
    analyze->add_option("--representation", aa.representation,
                        "auto|combinatorial_laplacian|normalized_laplacian|"
                        "hermitian_laplacian|normalized_hermitian_laplacian");
    analyze->add_option("--scaling", aa.scaling, "cluster_constant|paper_literal");
    analyze->add_option("--groups", aa.groups, "explicit group boundaries q1,q2,...");
    analyze->add_option("--seed", aa.seed, "clustering seed");
    analyze->add_option("--restarts", aa.restarts, "k-means restarts");
    analyze->add_option("--out", aa.out, "write the report here instead of stdout");
    analyze->add_option("--format", aa.format, "json|csv");
    analyze->add_flag("--allow-large", aa.allow_large,
                      "lift the 5000-vertex dense-solver cap");
    analyze->add_option("--clique-size", aa.clique_size, "fixture parameter");
    analyze->add_option("--match-weight", aa.match_weight, "fixture parameter");
    analyze->add_option("--clique-weight", aa.clique_weight, "fixture parameter");
    analyze->add_option("--blocks", aa.blocks, "fixture parameter");
    analyze->add_option("--block-size", aa.block_size, "fixture parameter");

    std::string config_path;
    int trials_override = 0;
    std::uint64_t seed_override = 0;
    bool seed_given = false;
    auto* experiment = app.add_subcommand("experiment", "run a sweep from a config file");
    experiment->add_option("config", config_path, "experiment config file")->required();
    experiment->add_option("--trials", trials_override, "override the config's trial count");
    experiment->add_option("--seed", seed_override, "override the config's master seed")
        ->each([&](const std::string&) { seed_given = true; });

    std::string gen_kind, gen_out;
    std::uint64_t gen_seed = 0;
    std::vector<std::string> gen_params;
    auto* generate = app.add_subcommand("generate", "write a synthetic graph");
    generate->add_option("--kind", gen_kind, "sbm|dsbm|geometric|fixture")->required();
    generate->add_option("--seed", gen_seed, "generator seed");
    generate->add_option("--out", gen_out, "output path prefix")->required();
    generate->add_option("--param", gen_params, "generator parameter key=value")
        ->take_all();

    CLI11_PARSE(app, argc, argv);

    try {
        if (analyze->parsed()) {
            if (aa.graph_path.empty() == aa.fixture_name.empty()) {
                std::cerr << "error: pass exactly one of a graph file or --fixture\n";
                return 1;
            }
            return run_analyze(aa);
        }
        if (experiment->parsed()) {
            auto cfg = sc::load_experiment_config(config_path);
            if (trials_override > 0) cfg.trials = trials_override;
            if (seed_given) cfg.master_seed = seed_override;
            const auto result = sc::run_experiment(cfg);
            const std::string prefix = cfg.out.empty() ? "sweep" : cfg.out;
            sc::write_sweep_outputs(result, prefix);
            std::cout << sc::sweep_to_csv(result);
            return 0;
        }
        if (generate->parsed()) {
            sc::ExperimentConfig params;
            for (const auto& kv : gen_params) {
                const auto eq = kv.find('=');
                if (eq == std::string::npos)
                    throw sc::InputError("--param expects key=value, got '" + kv + "'");
                params.params[kv.substr(0, eq)] = kv.substr(eq + 1);
            }
            return run_generate(gen_kind, params, gen_seed, gen_out);
        }
    } catch (const sc::NumericError& e) {
        std::cerr << "numerical error: " << e.what() << "\n";
        return 2;
    } catch (const sc::InputError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
