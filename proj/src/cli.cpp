#include "specgap/cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "specgap/hyperbolic.hpp"

namespace specgap::cli {

namespace {

const std::vector<std::string> kCommands = {"hyperbolic", "torus",       "beta",
                                            "zeta",       "convergence", "torsion"};

void write_file(const std::string& dir, const std::string& name, const std::string& bytes) {
    std::filesystem::create_directories(dir);
    std::ofstream out(dir + "/" + name, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + dir + "/" + name);
    out << bytes;
}

std::vector<MassFamily> all_masses(const PeriodicComplex& K) {
    std::vector<MassFamily> m;
    for (int j = 0; j <= K.rank; ++j) m.push_back(mass_family(K, j));
    return m;
}

// closed-form theta list for the configured model geometry, degrees 0..dim
std::vector<ClosedFormTheta> model_thetas(const RunConfig& cfg, int& dim) {
    if (cfg.geometry == "hyperbolic") {
        HyperbolicModel model = make_hyperbolic_model(cfg.d, cfg.vol);
        dim = cfg.d;
        std::vector<ClosedFormTheta> out;
        for (int j = 0; j <= cfg.d; ++j) out.push_back(theta_hyperbolic(model, j));
        return out;
    }
    if (cfg.geometry == "product") {
        HyperbolicModel a = make_hyperbolic_model(cfg.d, cfg.vol);
        HyperbolicModel b = make_hyperbolic_model(cfg.d2, cfg.vol2);
        dim = cfg.d + cfg.d2;
        std::vector<ClosedFormTheta> fa, fb;
        for (int j = 0; j <= cfg.d; ++j) fa.push_back(theta_hyperbolic(a, j));
        for (int j = 0; j <= cfg.d2; ++j) fb.push_back(theta_hyperbolic(b, j));
        std::vector<ClosedFormTheta> out;
        for (int k = 0; k <= dim; ++k) out.push_back(product_theta(fa, fb, k));
        return out;
    }
    throw ConfigError("geometry '" + cfg.geometry + "' has no closed-form model");
}

ZetaReport model_zeta_report(const ClosedFormTheta& cf, int dim, int degree) {
    ThetaFunction th = make_theta(cf);
    HeatExpansion exp = heat_expansion_from_theta(th, dim);
    BetaEstimate beta = estimate_beta(th, th.lambda0, {10.0, 1000.0}, 64);
    ZetaReport rep = determinant(th, exp, beta.beta_ls);
    rep.degree = degree;
    return rep;
}

int run_hyperbolic(const RunConfig& cfg) {
    int dim = 0;
    auto thetas = model_thetas(cfg, dim);
    if (cfg.degree < 0 || cfg.degree > dim) throw ConfigError("degree out of range");
    if (cfg.want_determinant) {
        ZetaReport rep = model_zeta_report(thetas[cfg.degree], dim, cfg.degree);
        std::printf("log_det(degree %d) = %s\n", cfg.degree,
                    format_number(rep.log_determinant).c_str());
        std::vector<ZetaReport> reports{rep};
        if (cfg.format == "structured")
            write_file(cfg.out_dir, "zeta.txt", serialize_structured(reports));
        else
            write_file(cfg.out_dir, "zeta.csv", zeta_table_csv(reports));
    } else {
        ThetaFunction th = make_theta(thetas[cfg.degree]);
        BetaEstimate est = estimate_beta(th, th.lambda0, {cfg.window_min, cfg.window_max}, 64);
        std::printf("beta(degree %d) = %s, beta_bar = %s\n", cfg.degree,
                    format_number(est.beta).c_str(), format_number(est.beta_bar).c_str());
        if (cfg.format == "structured")
            write_file(cfg.out_dir, "beta.txt", serialize_structured(est));
        else
            write_file(cfg.out_dir, "beta.csv", beta_table_csv(est));
    }
    return 0;
}

void validate_torus(const RunConfig& cfg) {
    if (cfg.g < 1 || cfg.g > 3) throw ConfigError("torus rank g must be 1, 2 or 3");
    if (cfg.n < 1) throw ConfigError("grid cells per axis must be >= 1");
    if (cfg.degree < 0 || cfg.degree > cfg.g) throw ConfigError("degree out of range");
    if (cfg.grid_resolution < 2) throw ConfigError("character resolution must be >= 2");
}

int run_torus(const RunConfig& cfg) {
    validate_torus(cfg);
    PeriodicComplex K = build_torus_complex(cfg.g, cfg.n, Mat::Identity(cfg.g, cfg.g));
    SpectralSample S = sample_spectrum(K, all_masses(K), cfg.grid_resolution, cfg.threads);
    if (cfg.want_theta) {
        ThetaFunction th = make_theta(S, cfg.degree);
        std::vector<double> ts(cfg.t_points), comb(cfg.t_points), ref(cfg.t_points);
        for (int i = 0; i < cfg.t_points; ++i) {
            ts[i] = cfg.t_min *
                    std::pow(cfg.t_max / cfg.t_min, static_cast<double>(i) / (cfg.t_points - 1));
            comb[i] = th(ts[i]);
            ref[i] = torus_theta_reference(K, cfg.degree, ts[i]);
        }
        write_file(cfg.out_dir, "theta.csv", theta_table_csv(ts, comb, ref));
        std::printf("theta table written (%d points), max rel error %s\n", cfg.t_points,
                    format_number([&] {
                        double m = 0;
                        for (int i = 0; i < cfg.t_points; ++i)
                            m = std::max(m, std::abs(comb[i] - ref[i]) / ref[i]);
                        return m;
                    }()).c_str());
    }
    if (cfg.want_spectrum) {
        SpectrumSummary sum = spectrum_summary(S);
        write_file(cfg.out_dir, "spectrum.csv", spectrum_table_csv(sum));
        std::printf("spectrum table written (%d degrees)\n", static_cast<int>(sum.per_degree.size()));
    }
    return 0;
}

int run_beta(const RunConfig& cfg) {
    BetaEstimate est;
    if (cfg.geometry == "torus") {
        validate_torus(cfg);
        PeriodicComplex K = build_torus_complex(cfg.g, cfg.n, Mat::Identity(cfg.g, cfg.g));
        SpectralSample S = sample_spectrum(K, all_masses(K), cfg.grid_resolution, cfg.threads);
        ThetaFunction th = make_theta(S, cfg.degree);
        est = estimate_beta(th, 0.0, {cfg.window_min, cfg.window_max}, 64);
    } else {
        int dim = 0;
        auto thetas = model_thetas(cfg, dim);
        if (cfg.degree < 0 || cfg.degree > dim) throw ConfigError("degree out of range");
        ThetaFunction th = make_theta(thetas[cfg.degree]);
        est = estimate_beta(th, th.lambda0, {cfg.window_min, cfg.window_max}, 64);
    }
    std::printf("beta = %s, beta_bar = %s, residual = %s\n", format_number(est.beta).c_str(),
                format_number(est.beta_bar).c_str(), format_number(est.residual).c_str());
    if (cfg.format == "structured")
        write_file(cfg.out_dir, "beta.txt", serialize_structured(est));
    else
        write_file(cfg.out_dir, "beta.csv", beta_table_csv(est));
    return 0;
}

int run_zeta(const RunConfig& cfg) {
    std::vector<ZetaReport> reports;
    if (cfg.geometry == "torus") {
        validate_torus(cfg);
        PeriodicComplex K = build_torus_complex(cfg.g, cfg.n, Mat::Identity(cfg.g, cfg.g));
        SpectralSample S = sample_spectrum(K, all_masses(K), cfg.grid_resolution, cfg.threads);
        for (int j = 0; j <= K.rank; ++j) {
            ThetaFunction th = make_theta(S, j);
            HeatExpansion exp = heat_expansion_from_theta(th, 0);
            BetaEstimate alpha = estimate_beta(th, 0.0, {1.0, 100.0}, 40);
            // Novikov-Shubin regime: the gap of the flat torus vanishes
            th.lambda0 = 0.0;
            ZetaReport rep = determinant(th, exp, std::max(0.1, alpha.beta_ls));
            rep.degree = j;
            reports.push_back(rep);
        }
    } else {
        int dim = 0;
        auto thetas = model_thetas(cfg, dim);
        for (int j = 0; j <= dim; ++j) reports.push_back(model_zeta_report(thetas[j], dim, j));
    }
    for (const auto& r : reports)
        std::printf("degree %d: zeta(0) = %s, zeta'(0) = %s, log_det = %s\n", r.degree,
                    format_number(r.zeta_at_0).c_str(), format_number(r.zeta_prime_at_0).c_str(),
                    format_number(r.log_determinant).c_str());
    if (cfg.format == "structured")
        write_file(cfg.out_dir, "zeta.txt", serialize_structured(reports));
    else
        write_file(cfg.out_dir, "zeta.csv", zeta_table_csv(reports));
    return 0;
}

int run_convergence(const RunConfig& cfg) {
    LabConfig lab;
    lab.grid_resolution = cfg.grid_resolution;
    lab.threads = cfg.threads;
    ConvergenceReport rep;
    if (cfg.preset == "circle-theta") {
        PeriodicComplex base = build_torus_complex(1, 8, Mat::Identity(1, 1));
        lab.grid_resolution = std::max(cfg.grid_resolution, 64);
        rep = theta_convergence(base, cfg.levels, {cfg.t_min, cfg.t_max}, 0, lab);
    } else if (cfg.preset == "circle-gap") {
        PeriodicComplex base = build_torus_complex(1, 8, Mat::Identity(1, 1));
        lab.double_resolution_per_level = (cfg.mass_shift == 0.0);
        rep = gap_convergence(base, cfg.levels, cfg.mass_shift, lab);
    } else if (cfg.preset == "circle-density") {
        PeriodicComplex base = build_torus_complex(1, 8, Mat::Identity(1, 1));
        lab.grid_resolution = std::max(cfg.grid_resolution, 256);
        std::vector<double> grid;
        for (double lam = 0.5; lam <= 50.0; lam *= 1.5) grid.push_back(lam);
        rep = density_sandwich(base, cfg.levels, grid, lab);
    } else if (cfg.preset == "circle-zeta") {
        PeriodicComplex base = build_torus_complex(1, 8, Mat::Identity(1, 1));
        std::vector<cdouble> probes = cfg.s_probes;
        if (probes.empty()) probes = {cdouble(2.0), cdouble(1.5)};
        rep = zeta_convergence(base, cfg.levels, probes, lab);
    } else if (cfg.preset == "t2-theta") {
        PeriodicComplex base = build_torus_complex(2, 4, Mat::Identity(2, 2));
        lab.grid_resolution = std::min(cfg.grid_resolution, 16);
        rep = theta_convergence(base, cfg.levels, {cfg.t_min, cfg.t_max}, 1, lab);
    } else {
        throw ConfigError("unknown preset '" + cfg.preset + "'");
    }
    std::printf("convergence preset %s: %d rows, monotone=%d%s\n", cfg.preset.c_str(),
                static_cast<int>(rep.rows.size()), rep.monotone ? 1 : 0,
                rep.degenerate ? " (degenerate tower)" : "");
    if (cfg.format == "structured")
        write_file(cfg.out_dir, "convergence.txt", serialize_structured(rep));
    else
        write_file(cfg.out_dir, "convergence.csv", convergence_table_csv(rep));
    return 0;
}

int run_torsion(const RunConfig& cfg) {
    int dim = 0;
    auto thetas = model_thetas(cfg, dim);
    std::vector<ZetaReport> reports;
    for (int j = 0; j <= dim; ++j) reports.push_back(model_zeta_report(thetas[j], dim, j));
    const double log_t = beta_torsion_log(reports);
    std::printf("log_torsion = %s\n", format_number(log_t).c_str());
    std::string extra = "torsion.log_torsion = " + format_number(log_t) + "\n";
    if (cfg.format == "structured")
        write_file(cfg.out_dir, "torsion.txt", serialize_structured(reports) + extra);
    else
        write_file(cfg.out_dir, "zeta.csv", zeta_table_csv(reports));
    return 0;
}

}  // namespace

std::string format_number(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::string theta_table_csv(const std::vector<double>& t, const std::vector<double>& comb,
                            const std::vector<double>& ref) {
    std::string out = "t,theta_comb,theta_ref,abs_error\n";
    for (std::size_t i = 0; i < t.size(); ++i)
        out += format_number(t[i]) + "," + format_number(comb[i]) + "," + format_number(ref[i]) +
               "," + format_number(std::abs(comb[i] - ref[i])) + "\n";
    return out;
}

std::string spectrum_table_csv(const SpectrumSummary& s) {
    std::string out = "degree,lambda0,kernel_dim,kappa0\n";
    for (std::size_t j = 0; j < s.per_degree.size(); ++j) {
        const auto& d = s.per_degree[j];
        out += std::to_string(j) + "," + format_number(d.lambda0) + "," +
               format_number(d.kernel_dim) + "," + format_number(d.kappa0) + "\n";
    }
    return out;
}

std::string zeta_table_csv(const std::vector<ZetaReport>& reports) {
    std::string out = "degree,zeta0,zeta_prime0,log_det\n";
    for (const auto& r : reports)
        out += std::to_string(r.degree) + "," + format_number(r.zeta_at_0) + "," +
               format_number(r.zeta_prime_at_0) + "," + format_number(r.log_determinant) + "\n";
    return out;
}

std::string convergence_table_csv(const ConvergenceReport& rep) {
    std::string out = "level,mesh,metric_name,value,error,order\n";
    for (const auto& r : rep.rows)
        out += std::to_string(r.level) + "," + format_number(r.mesh) + "," + r.metric + "," +
               format_number(r.value) + "," + format_number(r.error) + "," +
               format_number(r.order) + "\n";
    return out;
}

std::string beta_table_csv(const BetaEstimate& est) {
    std::string out = "beta,beta_bar,window_min,window_max,residual\n";
    out += format_number(est.beta) + "," + format_number(est.beta_bar) + "," +
           format_number(est.window.t_min) + "," + format_number(est.window.t_max) + "," +
           format_number(est.residual) + "\n";
    return out;
}

namespace {
std::string structured_header(const std::string& kind) {
    return "specgap.schema = 1\nkind = " + kind + "\n";
}
}  // namespace

std::string serialize_structured(const BetaEstimate& est) {
    std::string out = structured_header("beta_report");
    out += "beta.beta = " + format_number(est.beta) + "\n";
    out += "beta.beta_bar = " + format_number(est.beta_bar) + "\n";
    out += "beta.beta_ls = " + format_number(est.beta_ls) + "\n";
    out += "beta.window_min = " + format_number(est.window.t_min) + "\n";
    out += "beta.window_max = " + format_number(est.window.t_max) + "\n";
    out += "beta.residual = " + format_number(est.residual) + "\n";
    out += "beta.lambda0 = " + format_number(est.lambda0) + "\n";
    return out;
}

std::string serialize_structured(const std::vector<ZetaReport>& reports) {
    std::string out = structured_header("zeta_report");
    out += "zeta.count = " + std::to_string(reports.size()) + "\n";
    for (const auto& r : reports) {
        const std::string p = "zeta." + std::to_string(r.degree) + ".";
        out += p + "zeta1_at_0 = " + format_number(r.zeta1_at_0) + "\n";
        out += p + "zeta_inf_at_0 = " + format_number(r.zeta_inf_at_0) + "\n";
        out += p + "zeta_at_0 = " + format_number(r.zeta_at_0) + "\n";
        out += p + "zeta_prime_at_0 = " + format_number(r.zeta_prime_at_0) + "\n";
        out += p + "log_det = " + format_number(r.log_determinant) + "\n";
        out += p + "beta_used = " + format_number(r.beta_used) + "\n";
        out += p + "domain_notes = " + r.domain_notes + "\n";
    }
    return out;
}

std::string serialize_structured(const ConvergenceReport& rep) {
    std::string out = structured_header("convergence_report");
    out += "convergence.rows = " + std::to_string(rep.rows.size()) + "\n";
    out += "convergence.monotone = " + std::string(rep.monotone ? "1" : "0") + "\n";
    out += "convergence.degenerate = " + std::string(rep.degenerate ? "1" : "0") + "\n";
    for (std::size_t i = 0; i < rep.rows.size(); ++i) {
        const auto& r = rep.rows[i];
        const std::string p = "row." + std::to_string(i) + ".";
        out += p + "level = " + std::to_string(r.level) + "\n";
        out += p + "mesh = " + format_number(r.mesh) + "\n";
        out += p + "metric = " + r.metric + "\n";
        out += p + "value = " + format_number(r.value) + "\n";
        out += p + "error = " + format_number(r.error) + "\n";
        out += p + "order = " + format_number(r.order) + "\n";
    }
    return out;
}

std::map<std::string, std::string> parse_structured(const std::string& text) {
    std::map<std::string, std::string> kv;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        const auto eq = line.find(" = ");
        if (eq == std::string::npos) throw std::runtime_error("bad structured line: " + line);
        kv[line.substr(0, eq)] = line.substr(eq + 3);
    }
    if (kv.find("specgap.schema") == kv.end())
        throw std::runtime_error("missing schema version field");
    return kv;
}

BetaEstimate beta_from_structured(const std::string& text) {
    auto kv = parse_structured(text);
    if (kv.at("kind") != "beta_report") throw std::runtime_error("not a beta report");
    BetaEstimate est;
    est.beta = std::stod(kv.at("beta.beta"));
    est.beta_bar = std::stod(kv.at("beta.beta_bar"));
    est.beta_ls = std::stod(kv.at("beta.beta_ls"));
    est.window.t_min = std::stod(kv.at("beta.window_min"));
    est.window.t_max = std::stod(kv.at("beta.window_max"));
    est.residual = std::stod(kv.at("beta.residual"));
    est.lambda0 = std::stod(kv.at("beta.lambda0"));
    return est;
}

void apply_config_file(RunConfig& cfg, const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file " + path);
    std::string line;
    int geometry_blocks = 0;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) throw ConfigError("bad config line: " + line);
        auto trim = [](std::string s) {
            const auto a = s.find_first_not_of(" \t");
            const auto b = s.find_last_not_of(" \t");
            return a == std::string::npos ? std::string() : s.substr(a, b - a + 1);
        };
        const std::string key = trim(line.substr(0, eq));
        const std::string val = trim(line.substr(eq + 1));
        if (key == "geometry.kind") {
            cfg.geometry = val;
            ++geometry_blocks;
        } else if (key == "geometry.g")
            cfg.g = std::stoi(val);
        else if (key == "geometry.n")
            cfg.n = std::stoi(val);
        else if (key == "geometry.d")
            cfg.d = std::stoi(val);
        else if (key == "geometry.vol")
            cfg.vol = std::stod(val);
        else if (key == "geometry.d2")
            cfg.d2 = std::stoi(val);
        else if (key == "geometry.vol2")
            cfg.vol2 = std::stod(val);
        else if (key == "geometry.degree")
            cfg.degree = std::stoi(val);
        else if (key == "numeric.grid_resolution")
            cfg.grid_resolution = std::stoi(val);
        else if (key == "numeric.t_min")
            cfg.t_min = std::stod(val);
        else if (key == "numeric.t_max")
            cfg.t_max = std::stod(val);
        else if (key == "numeric.levels")
            cfg.levels = std::stoi(val);
        else if (key == "numeric.mass_shift")
            cfg.mass_shift = std::stod(val);
        else if (key == "numeric.window_min")
            cfg.window_min = std::stod(val);
        else if (key == "numeric.window_max")
            cfg.window_max = std::stod(val);
        else if (key == "numeric.preset")
            cfg.preset = val;
        else if (key == "numeric.threads")
            cfg.threads = std::stoi(val);
        else if (key == "output.dir")
            cfg.out_dir = val;
        else if (key == "output.format")
            cfg.format = val;
        else
            throw ConfigError("unknown config key: " + key);
    }
    if (geometry_blocks > 1) throw ConfigError("config file declares more than one geometry");
}

RunConfig parse_command_line(int argc, const char* const* argv) {
    RunConfig cfg;
    CLI::App app{"von Neumann spectral invariants of periodic complexes and model manifolds"};
    app.require_subcommand(1);
    app.fallthrough();

    std::string config_file, t_window, fit_window, probes;
    app.add_option("--config", config_file, "flat key=value configuration file");
    app.add_option("--out", cfg.out_dir, "output directory");
    app.add_option("--format", cfg.format, "csv | structured");
    app.add_option("--threads", cfg.threads, "worker threads for character sweeps");
    app.add_option("--seed", cfg.seed, "reserved; all computations are deterministic");

    auto* hyp = app.add_subcommand("hyperbolic", "closed-form hyperbolic model");
    hyp->add_option("--d", cfg.d, "odd dimension");
    hyp->add_option("--vol", cfg.vol, "volume");
    hyp->add_option("--degree", cfg.degree, "form degree");
    hyp->add_flag("--determinant", cfg.want_determinant, "compute log|Det|(Delta_j - lambda0)");

    auto* tor = app.add_subcommand("torus", "combinatorial flat torus");
    tor->add_option("--g", cfg.g, "rank of the deck group");
    tor->add_option("--n", cfg.n, "grid cells per axis");
    tor->add_option("--degree", cfg.degree, "form degree");
    tor->add_option("--resolution", cfg.grid_resolution, "character grid nodes per axis");
    tor->add_option("--t-window", t_window, "theta window, e.g. 0.5:5");
    tor->add_flag("--theta", cfg.want_theta, "write the theta table");
    tor->add_flag("--spectrum", cfg.want_spectrum, "write the spectrum table");

    auto* bet = app.add_subcommand("beta", "decay-exponent estimate");
    bet->add_option("--geometry", cfg.geometry, "torus | hyperbolic | product");
    bet->add_option("--g", cfg.g);
    bet->add_option("--n", cfg.n);
    bet->add_option("--d", cfg.d);
    bet->add_option("--vol", cfg.vol);
    bet->add_option("--d2", cfg.d2);
    bet->add_option("--vol2", cfg.vol2);
    bet->add_option("--degree", cfg.degree);
    bet->add_option("--resolution", cfg.grid_resolution);
    bet->add_option("--window", fit_window, "fit window, e.g. 10:1000");

    auto* zet = app.add_subcommand("zeta", "zeta values and determinants per degree");
    zet->add_option("--geometry", cfg.geometry, "torus | hyperbolic | product");
    zet->add_option("--g", cfg.g);
    zet->add_option("--n", cfg.n);
    zet->add_option("--d", cfg.d);
    zet->add_option("--vol", cfg.vol);
    zet->add_option("--d2", cfg.d2);
    zet->add_option("--vol2", cfg.vol2);
    zet->add_option("--resolution", cfg.grid_resolution);

    auto* con = app.add_subcommand("convergence", "mesh-refinement experiments");
    con->add_option("--preset", cfg.preset,
                    "circle-theta | circle-gap | circle-density | circle-zeta | t2-theta");
    con->add_option("--levels", cfg.levels, "refinement levels");
    con->add_option("--mass-shift", cfg.mass_shift, "m^2 deformation for circle-gap");
    con->add_option("--resolution", cfg.grid_resolution);
    con->add_option("--t-window", t_window);
    con->add_option("--s-probes", probes, "semicolon list of real probes, e.g. 2;1.5");

    auto* tos = app.add_subcommand("torsion", "analytic beta-torsion of a model");
    tos->add_option("--d", cfg.d);
    tos->add_option("--vol", cfg.vol);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        throw HelpRequested{app.help()};
    } catch (const CLI::ParseError& e) {
        throw ConfigError(e.what());
    }

    if (!config_file.empty()) apply_config_file(cfg, config_file);

    auto parse_window = [](const std::string& text, double& lo, double& hi) {
        const auto c = text.find(':');
        if (c == std::string::npos) throw ConfigError("window must look like lo:hi");
        lo = std::stod(text.substr(0, c));
        hi = std::stod(text.substr(c + 1));
    };
    if (!t_window.empty()) parse_window(t_window, cfg.t_min, cfg.t_max);
    if (!fit_window.empty()) parse_window(fit_window, cfg.window_min, cfg.window_max);
    if (!probes.empty()) {
        std::istringstream in(probes);
        std::string tok;
        while (std::getline(in, tok, ';'))
            if (!tok.empty()) cfg.s_probes.push_back(cdouble(std::stod(tok)));
    }

    if (hyp->parsed()) cfg.command = "hyperbolic", cfg.geometry = "hyperbolic";
    if (tor->parsed()) cfg.command = "torus", cfg.geometry = "torus";
    if (bet->parsed()) cfg.command = "beta";
    if (zet->parsed()) cfg.command = "zeta";
    if (con->parsed()) cfg.command = "convergence";
    if (tos->parsed()) cfg.command = "torsion", cfg.geometry = "hyperbolic";
    if (cfg.geometry.empty()) throw ConfigError("a geometry block is required");
    return cfg;
}

int run(const RunConfig& cfg) {
    try {
        if (cfg.format != "csv" && cfg.format != "structured")
            throw ConfigError("unknown format '" + cfg.format + "'");
        if (cfg.threads < 1) throw ConfigError("threads must be >= 1");
        if (std::find(kCommands.begin(), kCommands.end(), cfg.command) == kCommands.end())
            throw ConfigError("unknown command '" + cfg.command + "'");
        if (cfg.command == "hyperbolic") return run_hyperbolic(cfg);
        if (cfg.command == "torus") return run_torus(cfg);
        if (cfg.command == "beta") return run_beta(cfg);
        if (cfg.command == "zeta") return run_zeta(cfg);
        if (cfg.command == "convergence") return run_convergence(cfg);
        if (cfg.command == "torsion") return run_torsion(cfg);
        return 2;
    } catch (const ConfigError& e) {
        std::fprintf(stderr, "configuration error: %s\n", e.what());
        return 2;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "numeric failure: %s\n", e.what());
        return 3;
    }
}

}  // namespace specgap::cli
