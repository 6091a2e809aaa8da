#include <catch2/catch_amalgamated.hpp>

#include <filesystem>
#include <sstream>

#include "spectra_cert/config.hpp"
#include "spectra_cert/experiment.hpp"
#include "spectra_cert/generators.hpp"
#include "spectra_cert/report.hpp"

using namespace spectra_cert;
using Catch::Approx;

namespace {

const char* kSampleConfig = R"(# dsbm path sweep
[experiment]
kind = dsbm_path
trials = 2
master_seed = 42
k = 4
k_tilde = 1
representation = auto
scaling = cluster_constant
out = sweep_out

[sweep]
variable = epsilon
values = 0.02, 0.1

[params]
n = 12
)";

}  // namespace

TEST_CASE("config parsing and lossless round-trip") {
    std::istringstream in(kSampleConfig);
    const auto cfg = parse_experiment_config(in);
    CHECK(cfg.kind == "dsbm_path");
    CHECK(cfg.trials == 2);
    CHECK(cfg.master_seed == 42);
    CHECK(cfg.values == std::vector<double>{0.02, 0.1});
    CHECK(cfg.param_i("n", 0) == 12);

    std::ostringstream out;
    write_experiment_config(cfg, out);
    std::istringstream again(out.str());
    const auto cfg2 = parse_experiment_config(again);
    CHECK(cfg2.kind == cfg.kind);
    CHECK(cfg2.trials == cfg.trials);
    CHECK(cfg2.master_seed == cfg.master_seed);
    CHECK(cfg2.k == cfg.k);
    CHECK(cfg2.k_tilde == cfg.k_tilde);
    CHECK(cfg2.representation == cfg.representation);
    CHECK(cfg2.scaling == cfg.scaling);
    CHECK(cfg2.groups == cfg.groups);
    CHECK(cfg2.out == cfg.out);
    CHECK(cfg2.variable == cfg.variable);
    CHECK(cfg2.values == cfg.values);
    CHECK(cfg2.params == cfg.params);
}

TEST_CASE("config validation errors") {
    auto parse = [](const std::string& text) {
        std::istringstream in(text);
        return parse_experiment_config(in);
    };
    CHECK_THROWS_AS(parse("[sweep]\nvariable = x\nvalues = 1\n"), InputError);  // no kind
    CHECK_THROWS_AS(parse("[experiment]\nkind = fixture\n[sweep]\nvariable = x\n"),
                    InputError);  // empty values
    CHECK_THROWS_AS(parse("[experiment]\nbogus_key = 1\n"), InputError);
    CHECK_THROWS_AS(parse("[experiment]\ntrials = zero\n"), InputError);
    CHECK_THROWS_AS(parse("no_section = 1\n"), InputError);
}

TEST_CASE("report JSON schema") {
    auto [g, p] = fixture("two_clique_matching");
    auto report = certify_undirected(g, p);
    ClusteringInfo ci;
    ci.assignment = p.assignment();
    ci.objective = 0.25;
    ci.recovery_sym_diff_vol = 0.0;
    ci.recovery_fraction = 0.0;
    report.clustering = ci;
    const auto j = report_to_json(report);

    SECTION("pinned top-level keys") {
        for (const char* key : {"spec_version", "input", "spectrum", "gammas", "groups",
                                "bounds", "true_distance", "quality", "clustering"})
            CHECK(j.contains(key));
        CHECK(j["spec_version"] == kReportSchemaVersion);
    }
    SECTION("bounds carry values or null with a reason") {
        CHECK(j["bounds"]["thm1"].is_number());
        CHECK(j["bounds"]["cor4"].is_number());
        CHECK(j["bounds"]["thm5_rayleigh"].is_null());
        CHECK(j["details"]["bound_reasons"].contains("thm5_rayleigh"));
    }
    SECTION("quality and clustering blocks") {
        CHECK(j["quality"]["rho_tilde"].get<double>() == Approx(1000.0 / 3450.0));
        CHECK(j["quality"]["psi"].is_null());
        CHECK(j["clustering"]["objective"].get<double>() == Approx(0.25));
        CHECK(j["clustering"]["recovery"]["fraction"].get<double>() == 0.0);
    }
    SECTION("serialised text parses back and contains no non-finite tokens") {
        const std::string text = j.dump();
        CHECK(text.find("nan") == std::string::npos);
        CHECK(text.find("inf") == std::string::npos);
        CHECK_NOTHROW(nlohmann::json::parse(text));
    }
}

TEST_CASE("vacuous bounds are flagged but still reported") {
    BoundReport r;
    r.k = 2;
    r.thm1.value = 5.0;   // above the trivial cap k
    r.thm1.vacuous = true;
    r.cor2.value = 0.4;
    const auto j = report_to_json(r);
    CHECK(j["bounds"]["thm1"].get<double>() == 5.0);
    CHECK(j["details"]["vacuous"] == nlohmann::json({"thm1"}));
}

TEST_CASE("digraph report fields") {
    auto [g, p] = fixture("perfect_cycle");
    const auto report = certify_digraph(g, p);
    const auto j = report_to_json(report);
    CHECK(j["bounds"]["thm5_rayleigh"].get<double>() == Approx(0.0).margin(1e-10));
    CHECK(j["bounds"]["thm5_psi"].get<double>() == Approx(0.0).margin(1e-10));
    CHECK(j["bounds"]["laenen_sun"].get<double>() == Approx(0.642).margin(0.001));
    CHECK(j["quality"]["eta"].get<double>() == Approx(2.5569).margin(0.001));
    CHECK(j["quality"]["psi"].get<double>() == 0.0);
    CHECK(j["quality"]["theta"].get<double>() == Approx(1.0));
    CHECK(j["bounds"]["thm1"].is_null());
}

TEST_CASE("comparison bound turns not-applicable when eta stays below one") {
    // a fixed sparse digraph with weak path alignment: the comparison bound's
    // eta lands below 1, which the report marks as a defined non-value
    const int pairs[][2] = {
        {1, 0},   {7, 0},   {0, 13},  {24, 0},  {26, 0},  {5, 1},   {7, 1},   {15, 1},
        {18, 1},  {1, 19},  {25, 1},  {2, 9},   {13, 2},  {22, 2},  {2, 23},  {2, 26},
        {3, 4},   {6, 3},   {3, 20},  {3, 23},  {4, 11},  {4, 24},  {26, 4},  {10, 5},
        {14, 5},  {5, 15},  {6, 14},  {6, 21},  {7, 11},  {7, 14},  {25, 7},  {8, 12},
        {15, 8},  {16, 8},  {17, 8},  {8, 19},  {8, 20},  {9, 12},  {14, 9},  {18, 9},
        {9, 21},  {9, 23},  {9, 24},  {14, 10}, {10, 15}, {10, 19}, {23, 10}, {10, 25},
        {12, 11}, {14, 11}, {11, 19}, {20, 11}, {11, 25}, {12, 21}, {13, 16}, {18, 13},
        {13, 19}, {20, 13}, {13, 21}, {13, 22}, {17, 14}, {19, 14}, {15, 21}, {25, 15},
        {26, 15}, {16, 20}, {20, 17}, {18, 24}, {23, 22}, {22, 24}, {26, 23}};
    std::vector<Edge> edges;
    for (const auto& pr : pairs) edges.push_back({pr[0], pr[1], 1.0});
    Graph g(27, true, std::move(edges));
    const std::vector<int> blocks = {2, 1, 1, 1, 2, 1, 1, 2, 1, 2, 2, 3, 0, 0,
                                     1, 3, 1, 0, 1, 1, 3, 0, 2, 0, 2, 3, 3};
    const auto r = certify_digraph(g, Partition(4, blocks));
    REQUIRE(r.eta.has_value());
    CHECK(*r.eta < 1.0);
    CHECK_FALSE(r.laenen_sun.value.has_value());
    CHECK(r.laenen_sun.reason.find("eta") != std::string::npos);
    // the structural certificates remain available
    CHECK(r.thm5_rayleigh.value.has_value());
    const auto j = report_to_json(r);
    CHECK(j["bounds"]["laenen_sun"].is_null());
    CHECK(j["quality"]["eta"].get<double>() < 1.0);
}

TEST_CASE("single-report CSV") {
    auto [g, p] = fixture("perfect_cycle");
    const auto r = certify_digraph(g, p);
    const std::string csv = report_to_csv(r);
    std::istringstream lines(csv);
    std::string header, row, extra;
    REQUIRE(std::getline(lines, header));
    REQUIRE(std::getline(lines, row));
    CHECK_FALSE(std::getline(lines, extra));
    CHECK(header.find("thm5_rayleigh") != std::string::npos);
    CHECK(row.find("NA") != std::string::npos);  // undirected bounds undefined
    CHECK(row.find("nan") == std::string::npos);
}

TEST_CASE("experiment runner") {
    std::istringstream in(kSampleConfig);
    auto cfg = parse_experiment_config(in);
    const auto tmp = std::filesystem::temp_directory_path() / "sc_sweep_test";
    std::filesystem::create_directories(tmp);
    cfg.out = (tmp / "run").string();

    const auto result = run_experiment(cfg);
    REQUIRE(result.points.size() == 2);
    REQUIRE(result.points[0].trials.size() == 2);

    SECTION("deterministic rerun gives identical CSV") {
        const auto again = run_experiment(cfg);
        CHECK(sweep_to_csv(result) == sweep_to_csv(again));
    }
    SECTION("CSV header and shape") {
        const std::string csv = sweep_to_csv(result);
        std::istringstream lines(csv);
        std::string header;
        std::getline(lines, header);
        CHECK(header.substr(0, 11) == "sweep_value");
        CHECK(header.find("thm5_rayleigh_mean") != std::string::npos);
        CHECK(header.find("recovery_fraction_std") != std::string::npos);
        int rows = 0;
        std::string row;
        while (std::getline(lines, row))
            if (!row.empty()) ++rows;
        CHECK(rows == 2);
    }
    SECTION("single trial has zero standard deviation") {
        auto one = cfg;
        one.trials = 1;
        one.values = {0.05};
        const auto r1 = run_experiment(one);
        const std::string csv = sweep_to_csv(r1);
        // every *_std cell is 0 or NA
        std::istringstream lines(csv);
        std::string header, row;
        std::getline(lines, header);
        std::getline(lines, row);
        std::vector<std::string> headers, cells;
        for (std::istringstream hs(header), rs(row);;) {
            std::string h, c;
            if (!std::getline(hs, h, ',') || !std::getline(rs, c, ',')) break;
            headers.push_back(h);
            cells.push_back(c);
        }
        REQUIRE(headers.size() == cells.size());
        for (std::size_t i = 0; i < headers.size(); ++i)
            if (headers[i].size() > 4 &&
                headers[i].substr(headers[i].size() - 4) == "_std" && cells[i] != "NA")
                CHECK(std::stod(cells[i]) == 0.0);
    }
    SECTION("sweep files are written") {
        write_sweep_outputs(result, cfg.out);
        CHECK(std::filesystem::exists(cfg.out + ".csv"));
        CHECK(std::filesystem::exists(cfg.out + "_point_0.json"));
        CHECK(std::filesystem::exists(cfg.out + "_point_1.json"));
        std::ifstream js(cfg.out + "_point_0.json");
        nlohmann::json parsed;
        js >> parsed;
        CHECK(parsed["trials"].size() == 2);
        CHECK(parsed["trials"][0]["bounds"].contains("thm5_rayleigh"));
    }
}

TEST_CASE("threshold-regime and cyclic sweeps run end to end") {
    SECTION("sbm_threshold derives valid probabilities") {
        ExperimentConfig cfg;
        cfg.kind = "sbm_threshold";
        cfg.trials = 1;
        cfg.master_seed = 31;
        cfg.variable = "beta";
        cfg.values = {1.0};
        cfg.params["n"] = "150";
        const auto result = run_experiment(cfg);
        const auto& r = result.points[0].trials[0].report;
        CHECK(r.k == 2);
        CHECK(r.n_vertices == 300);
        if (r.thm1.value) CHECK(*r.thm1.value >= r.true_distance - 1e-9);
    }
    SECTION("sbm_threshold rejects sweep values pushing p past one") {
        ExperimentConfig cfg;
        cfg.kind = "sbm_threshold";
        cfg.trials = 1;
        cfg.variable = "beta";
        cfg.values = {500.0};
        cfg.params["n"] = "20";
        CHECK_THROWS_AS(run_experiment(cfg), InputError);
    }
    SECTION("dsbm_cycle sweeps the cyclic structure") {
        ExperimentConfig cfg;
        cfg.kind = "dsbm_cycle";
        cfg.trials = 1;
        cfg.master_seed = 33;
        cfg.variable = "epsilon";
        cfg.values = {0.02};
        cfg.params["n"] = "15";
        const auto result = run_experiment(cfg);
        const auto& r = result.points[0].trials[0].report;
        REQUIRE(r.psi.has_value());
        CHECK(*r.psi < 0.2);  // near-perfect cycle at low noise
        REQUIRE(r.thm5_rayleigh.value.has_value());
        CHECK(*r.thm5_rayleigh.value >= r.true_distance - 1e-9);
    }
}

TEST_CASE("bad experiment kind is reported") {
    ExperimentConfig cfg;
    cfg.kind = "who_knows";
    cfg.trials = 1;
    cfg.values = {1.0};
    CHECK_THROWS_AS(run_experiment(cfg), InputError);
}
