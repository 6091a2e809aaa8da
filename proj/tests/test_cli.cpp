// Drives the installed binary end to end: generate / analyze / experiment,
// exit codes and output formats.

#include <catch2/catch_amalgamated.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "spectra_cert/graph.hpp"

namespace fs = std::filesystem;
using Catch::Approx;

namespace {

const std::string kBinary = SPECTRA_CERT_BINARY;

struct RunResult {
    int exit_code;
    std::string stdout_text;
};

RunResult run(const std::string& args) {
    const auto out = fs::temp_directory_path() / "sc_cli_stdout.txt";
    const std::string cmd = kBinary + " " + args + " > " + out.string() + " 2>/dev/null";
    const int rc = std::system(cmd.c_str());
    std::ifstream f(out);
    std::stringstream ss;
    ss << f.rdbuf();
    return {WEXITSTATUS(rc), ss.str()};
}

std::string read_file(const fs::path& p) {
    std::ifstream f(p);
    std::stringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

fs::path workdir() {
    const auto d = fs::temp_directory_path() / "sc_cli_test";
    fs::create_directories(d);
    return d;
}

}  // namespace

TEST_CASE("generate is deterministic and round-trips") {
    const auto dir = workdir();
    const auto p1 = (dir / "g1").string();
    const auto p2 = (dir / "g2").string();
    REQUIRE(run("generate --kind sbm --seed 7 --out " + p1 +
                " --param k=2 --param n=12 --param p_in=0.8 --param p_out=0.2")
                .exit_code == 0);
    REQUIRE(run("generate --kind sbm --seed 7 --out " + p2 +
                " --param k=2 --param n=12 --param p_in=0.8 --param p_out=0.2")
                .exit_code == 0);
    CHECK(read_file(p1 + ".edges") == read_file(p2 + ".edges"));
    CHECK(read_file(p1 + ".labels") == read_file(p2 + ".labels"));

    const auto g = spectra_cert::load_edge_list(p1 + ".edges", false);
    CHECK(g.size() == 24);
    const auto p = spectra_cert::load_labels(p1 + ".labels", g);
    CHECK(p.k() == 2);
}

TEST_CASE("generated digraphs respect the anti-parallel convention on reload") {
    const auto dir = workdir();
    const auto out = (dir / "d1").string();
    REQUIRE(run("generate --kind dsbm --seed 3 --out " + out +
                " --param k=4 --param n=10 --param eps=0.2")
                .exit_code == 0);
    CHECK_NOTHROW(spectra_cert::load_edge_list(out + ".edges", true));
}

TEST_CASE("analyze a fixture emits the full report") {
    const auto r = run("analyze --fixture two_clique_matching --k 2 --seed 1");
    REQUIRE(r.exit_code == 0);
    const auto j = nlohmann::json::parse(r.stdout_text);
    CHECK(j["spec_version"].is_string());
    CHECK(j["bounds"]["cor4"].get<double>() == Approx(0.0).margin(1e-8));
    CHECK(j["bounds"]["cor2"].get<double>() == Approx(0.8).margin(1e-6));
    CHECK(j["true_distance"].get<double>() == Approx(0.0).margin(1e-8));
    // ground truth comes from the fixture, so recovery and a reference
    // report are present
    CHECK(j["clustering"]["recovery"]["fraction"].get<double>() == 0.0);
    CHECK(j.contains("ground_truth"));
}

TEST_CASE("analyze a digraph fixture") {
    const auto r = run("analyze --fixture perfect_path --k 5 --seed 1");
    REQUIRE(r.exit_code == 0);
    const auto j = nlohmann::json::parse(r.stdout_text);
    CHECK(j["bounds"]["thm5_rayleigh"].get<double>() == Approx(0.0).margin(1e-8));
    CHECK(j["bounds"]["laenen_sun"].get<double>() == Approx(0.294).margin(0.01));
    CHECK(j["quality"]["psi"].get<double>() == 0.0);
}

TEST_CASE("analyze a user file with labels") {
    const auto dir = workdir();
    const auto out = (dir / "an").string();
    REQUIRE(run("generate --kind sbm --seed 11 --out " + out +
                " --param k=2 --param n=15 --param p_in=0.9 --param p_out=0.05")
                .exit_code == 0);
    const auto r = run("analyze " + out + ".edges --labels " + out + ".labels --k 2 --seed 2");
    REQUIRE(r.exit_code == 0);
    const auto j = nlohmann::json::parse(r.stdout_text);
    CHECK(j["clustering"]["recovery"]["fraction"].get<double>() <= 0.05);
    CHECK(j["ground_truth"]["bounds"]["thm1"].is_number());
}

TEST_CASE("explicit group boundaries are honoured") {
    const auto dir = workdir();
    const auto out = (dir / "grp").string();
    REQUIRE(run("generate --kind sbm --seed 4 --out " + out +
                " --param k=4 --param n=12 --param p_in=0.9 --param p_out=0.05")
                .exit_code == 0);
    const auto r = run("analyze " + out + ".edges --labels " + out +
                       ".labels --k 4 --seed 1 --groups 2");
    REQUIRE(r.exit_code == 0);
    const auto j = nlohmann::json::parse(r.stdout_text);
    CHECK(j["groups"] == nlohmann::json({0, 2, 4}));
    CHECK(j["details"]["groups_source"] == "user");
}

TEST_CASE("analyze --format csv emits a two-line table") {
    const auto r = run("analyze --fixture perfect_cycle --k 5 --seed 1 --format csv");
    REQUIRE(r.exit_code == 0);
    std::istringstream lines(r.stdout_text);
    std::string header, row;
    REQUIRE(std::getline(lines, header));
    REQUIRE(std::getline(lines, row));
    CHECK(header.substr(0, 2) == "k,");
    CHECK(row.substr(0, 2) == "5,");
}

TEST_CASE("missing file exits 1 with a message") {
    const auto r = run("analyze /no/such/file.edges --k 2");
    CHECK(r.exit_code == 1);
}

TEST_CASE("conflicting inputs exit 1") {
    CHECK(run("analyze --k 2").exit_code == 1);
}

TEST_CASE("dense-solver vertex cap refuses large graphs without the override") {
    const auto dir = workdir();
    const auto path = dir / "big.edges";
    {
        std::ofstream f(path);
        for (int u = 0; u < 5100; ++u) f << u << " " << (u + 1) << "\n";
    }
    CHECK(run("analyze " + path.string() + " --k 2").exit_code == 1);
}

TEST_CASE("experiment subcommand writes CSV and JSON") {
    const auto dir = workdir();
    const auto cfg_path = dir / "exp.cfg";
    {
        std::ofstream f(cfg_path);
        f << "[experiment]\nkind = dsbm_path\ntrials = 2\nmaster_seed = 5\nk = 4\n"
          << "out = " << (dir / "sweep").string() << "\n"
          << "[sweep]\nvariable = epsilon\nvalues = 0.05,0.15\n"
          << "[params]\nn = 10\n";
    }
    const auto r = run("experiment " + cfg_path.string());
    REQUIRE(r.exit_code == 0);
    CHECK(r.stdout_text.substr(0, 11) == "sweep_value");
    CHECK(fs::exists(dir / "sweep.csv"));
    CHECK(fs::exists(dir / "sweep_point_1.json"));
}

TEST_CASE("sweep outputs are identical across thread counts") {
    const auto dir = workdir();
    const auto cfg_path = dir / "thr.cfg";
    {
        std::ofstream f(cfg_path);
        f << "[experiment]\nkind = dsbm_path\ntrials = 4\nmaster_seed = 9\nk = 4\n"
          << "out = " << (dir / "thr_sweep").string() << "\n"
          << "[sweep]\nvariable = epsilon\nvalues = 0.08\n"
          << "[params]\nn = 12\n";
    }
    std::string csv1, csv4;
    for (auto [threads, target] : {std::pair{"1", &csv1}, std::pair{"4", &csv4}}) {
        const auto out = fs::temp_directory_path() / "sc_cli_thr.txt";
        const std::string cmd = std::string("SPECTRA_CERT_THREADS=") + threads + " " +
                                kBinary + " experiment " + cfg_path.string() + " > " +
                                out.string() + " 2>/dev/null";
        REQUIRE(WEXITSTATUS(std::system(cmd.c_str())) == 0);
        *target = read_file(out);
    }
    CHECK(csv1 == csv4);
    CHECK(!csv1.empty());
}

TEST_CASE("bad config exits 1") {
    const auto dir = workdir();
    const auto cfg_path = dir / "bad.cfg";
    {
        std::ofstream f(cfg_path);
        f << "[experiment]\nkind = dsbm_path\n[sweep]\nvariable = epsilon\n";
    }
    CHECK(run("experiment " + cfg_path.string()).exit_code == 1);
}
