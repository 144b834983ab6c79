#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>

#include "specgap/cli.hpp"

using namespace specgap;
using namespace specgap::cli;

namespace {

RunConfig parse(std::vector<std::string> args) {
    std::vector<const char*> argv = {"specgap"};
    for (const auto& a : args) argv.push_back(a.c_str());
    return parse_command_line(static_cast<int>(argv.size()), argv.data());
}

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE(in.good());
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

struct TempDir {
    std::string path;
    explicit TempDir(const std::string& name) : path("/tmp/specgap_test_" + name) {
        std::filesystem::remove_all(path);
        std::filesystem::create_directories(path);
    }
    ~TempDir() { std::filesystem::remove_all(path); }
};

}  // namespace

TEST_CASE("command-line parsing and overrides") {
    auto cfg = parse({"torus", "--g", "1", "--n", "16", "--theta", "--t-window", "0.5:5",
                      "--out", "/tmp/x", "--format", "structured", "--threads", "2"});
    CHECK(cfg.command == "torus");
    CHECK(cfg.geometry == "torus");
    CHECK(cfg.g == 1);
    CHECK(cfg.n == 16);
    CHECK(cfg.want_theta);
    CHECK(cfg.t_min == 0.5);
    CHECK(cfg.t_max == 5.0);
    CHECK(cfg.out_dir == "/tmp/x");
    CHECK(cfg.format == "structured");
    CHECK(cfg.threads == 2);

    CHECK_THROWS_AS(parse({"unknown-command"}), ConfigError);
    CHECK_THROWS_AS(parse({"torus", "--t-window", "nonsense"}), std::exception);
}

TEST_CASE("config files feed defaults, flags override") {
    TempDir dir("config");
    const std::string file = dir.path + "/run.conf";
    {
        std::ofstream out(file);
        out << "# comment line\n";
        out << "geometry.kind = torus\n";
        out << "geometry.g = 1\n";
        out << "geometry.n = 4\n";
        out << "numeric.grid_resolution = 8\n";
        out << "output.format = structured\n";
    }
    RunConfig cfg;
    cfg.command = "torus";
    apply_config_file(cfg, file);
    CHECK(cfg.geometry == "torus");
    CHECK(cfg.n == 4);
    CHECK(cfg.grid_resolution == 8);
    CHECK(cfg.format == "structured");

    std::ofstream(file) << "geometry.bogus = 1\n";
    CHECK_THROWS_AS(apply_config_file(cfg, file), ConfigError);
    CHECK_THROWS_AS(apply_config_file(cfg, dir.path + "/missing.conf"), ConfigError);
}

TEST_CASE("csv schemas are pinned") {
    CHECK(theta_table_csv({1.0}, {2.0}, {3.0}).rfind("t,theta_comb,theta_ref,abs_error\n", 0) == 0);
    SpectrumSummary sum;
    sum.per_degree.push_back({0.5, 0.0, 0.5, 1e-10});
    CHECK(spectrum_table_csv(sum).rfind("degree,lambda0,kernel_dim,kappa0\n", 0) == 0);
    std::vector<ZetaReport> reports(1);
    CHECK(zeta_table_csv(reports).rfind("degree,zeta0,zeta_prime0,log_det\n", 0) == 0);
    ConvergenceReport rep;
    CHECK(convergence_table_csv(rep).rfind("level,mesh,metric_name,value,error,order\n", 0) == 0);
    BetaEstimate est;
    CHECK(beta_table_csv(est).rfind("beta,beta_bar,window_min,window_max,residual\n", 0) == 0);
}

TEST_CASE("numbers serialize with 17 significant digits") {
    CHECK(format_number(1.0 / 3.0) == "0.33333333333333331");
    CHECK(format_number(0.5) == "0.5");
}

TEST_CASE("structured beta reports round-trip") {
    BetaEstimate est;
    est.beta = 1.4999999999999912;
    est.beta_bar = 1.5334567890123456;
    est.beta_ls = 1.5111111111111111;
    est.window = {10.0, 1000.0};
    est.residual = 3.25e-4;
    est.lambda0 = 1.0;
    const std::string text = serialize_structured(est);
    CHECK(text.find("specgap.schema = 1") != std::string::npos);
    BetaEstimate back = beta_from_structured(text);
    CHECK(back.beta == est.beta);
    CHECK(back.beta_bar == est.beta_bar);
    CHECK(back.beta_ls == est.beta_ls);
    CHECK(back.window.t_min == est.window.t_min);
    CHECK(back.window.t_max == est.window.t_max);
    CHECK(back.residual == est.residual);
    CHECK(back.lambda0 == est.lambda0);

    CHECK_THROWS(parse_structured("no schema here\n"));
    CHECK_THROWS(beta_from_structured(serialize_structured(std::vector<ZetaReport>{})));
}

TEST_CASE("run: hyperbolic determinant prints and persists") {
    TempDir dir("hyp");
    RunConfig cfg;
    cfg.command = "hyperbolic";
    cfg.geometry = "hyperbolic";
    cfg.d = 5;
    cfg.vol = 1.0;
    cfg.degree = 1;
    cfg.want_determinant = true;
    cfg.out_dir = dir.path;
    CHECK(run(cfg) == 0);
    const std::string csv = slurp(dir.path + "/zeta.csv");
    CHECK(csv.find("8.70622") != std::string::npos);
}

TEST_CASE("run: torus theta and spectrum tables are deterministic") {
    TempDir dir("torus");
    RunConfig cfg;
    cfg.command = "torus";
    cfg.geometry = "torus";
    cfg.g = 1;
    cfg.n = 8;
    cfg.grid_resolution = 16;
    cfg.want_theta = true;
    cfg.want_spectrum = true;
    cfg.out_dir = dir.path;
    CHECK(run(cfg) == 0);
    const std::string theta1 = slurp(dir.path + "/theta.csv");
    const std::string spec1 = slurp(dir.path + "/spectrum.csv");
    cfg.threads = 3;
    CHECK(run(cfg) == 0);
    CHECK(slurp(dir.path + "/theta.csv") == theta1);
    CHECK(slurp(dir.path + "/spectrum.csv") == spec1);
}

TEST_CASE("run: convergence preset writes the long-format table") {
    TempDir dir("conv");
    RunConfig cfg;
    cfg.command = "convergence";
    cfg.geometry = "torus";
    cfg.preset = "circle-gap";
    cfg.levels = 3;
    cfg.mass_shift = 1.0;
    cfg.grid_resolution = 16;
    cfg.out_dir = dir.path;
    CHECK(run(cfg) == 0);
    const std::string csv = slurp(dir.path + "/convergence.csv");
    CHECK(csv.find("lambda0.deg0") != std::string::npos);
}

TEST_CASE("exit codes: 2 for configuration errors, 3 for numeric failures") {
    RunConfig bad;
    bad.command = "torus";
    bad.geometry = "torus";
    bad.g = 9;
    CHECK(run(bad) == 2);

    RunConfig badfmt;
    badfmt.command = "torus";
    badfmt.geometry = "torus";
    badfmt.format = "yaml";
    CHECK(run(badfmt) == 2);

    RunConfig badpreset;
    badpreset.command = "convergence";
    badpreset.geometry = "torus";
    badpreset.preset = "no-such-preset";
    CHECK(run(badpreset) == 2);

    // numeric failure: a beta window that reaches the saturation regime
    RunConfig sat;
    sat.command = "beta";
    sat.geometry = "torus";
    sat.g = 1;
    sat.n = 8;
    sat.grid_resolution = 8;
    sat.window_min = 1e-9;
    sat.window_max = 1.0;
    sat.out_dir = "/tmp/specgap_test_exit3";
    CHECK(run(sat) == 3);
}

TEST_CASE("structured zeta and convergence serializations carry their rows") {
    std::vector<ZetaReport> reports(2);
    reports[0].degree = 0;
    reports[1].degree = 1;
    reports[1].log_determinant = 8.7;
    const std::string z = serialize_structured(reports);
    CHECK(z.find("kind = zeta_report") != std::string::npos);
    CHECK(z.find("zeta.1.log_det = 8.7") != std::string::npos);

    ConvergenceReport rep;
    rep.rows.push_back({0, 0.125, "metric", 1.0, 0.5, 2.0});
    const std::string c = serialize_structured(rep);
    CHECK(c.find("kind = convergence_report") != std::string::npos);
    CHECK(c.find("row.0.metric = metric") != std::string::npos);
    auto kv = parse_structured(c);
    CHECK(kv.at("row.0.mesh") == "0.125");
}
