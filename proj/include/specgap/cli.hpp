#pragma once

#include <map>
#include <string>
#include <vector>

#include "specgap/lab.hpp"
#include "specgap/spectral_functions.hpp"
#include "specgap/zeta.hpp"

// Batch driver: configuration ingestion (flags over a flat key=value file),
// experiment orchestration, and persistence of CSV tables and structured
// reports. All outputs are deterministic for a fixed configuration and every
// numeric is written with 17 significant digits.

namespace specgap::cli {

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct HelpRequested {
    std::string text;
};

struct RunConfig {
    std::string command;  // hyperbolic | torus | beta | zeta | convergence | torsion

    // geometry block (exactly one active)
    std::string geometry;  // "torus" | "hyperbolic" | "product"
    int g = 1;
    int n = 8;
    int d = 5;
    double vol = 1.0;
    int d2 = 3;
    double vol2 = 1.0;
    int degree = 0;
    bool all_degrees = false;

    // numeric block
    int grid_resolution = 32;
    double t_min = 0.5;
    double t_max = 5.0;
    int t_points = 50;
    std::vector<cdouble> s_probes;
    int levels = 3;
    double mass_shift = 1.0;
    double window_min = 10.0;
    double window_max = 1000.0;
    std::string preset;

    // output block
    std::string out_dir = ".";
    std::string format = "csv";  // csv | structured
    int threads = 1;
    unsigned long seed = 0;  // reserved, all computations deterministic

    // command toggles
    bool want_theta = false;
    bool want_spectrum = false;
    bool want_determinant = false;
};

// Flat key=value configuration file with section prefixes (geometry.,
// numeric., output.); command-line flags override file values.
void apply_config_file(RunConfig& cfg, const std::string& path);

RunConfig parse_command_line(int argc, const char* const* argv);

// exit status: 0 success, 2 configuration error, 3 numeric failure
int run(const RunConfig& cfg);

// serializers (stable schemas; see README)
std::string theta_table_csv(const std::vector<double>& t, const std::vector<double>& comb,
                            const std::vector<double>& ref);
std::string spectrum_table_csv(const SpectrumSummary& s);
std::string zeta_table_csv(const std::vector<ZetaReport>& reports);
std::string convergence_table_csv(const ConvergenceReport& rep);
std::string beta_table_csv(const BetaEstimate& est);

std::string serialize_structured(const BetaEstimate& est);
std::string serialize_structured(const std::vector<ZetaReport>& reports);
std::string serialize_structured(const ConvergenceReport& rep);

// structured codec: versioned flat key/value text
std::map<std::string, std::string> parse_structured(const std::string& text);
BetaEstimate beta_from_structured(const std::string& text);

// 17 significant digits, locale-free
std::string format_number(double v);

}  // namespace specgap::cli
