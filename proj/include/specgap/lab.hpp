#pragma once

#include <string>
#include <vector>

#include "specgap/bloch.hpp"
#include "specgap/spectral_functions.hpp"

// Mesh-refinement convergence experiments on flat tori, where the continuum
// references are exact: tau(e^{-t Delta_j}) = binom(g,j) vol (4 pi t)^{-g/2}.
// The unknowable constants of the approximation theory appear only as
// observed per-level ratios, never as formulas.

namespace specgap {

struct ConvergenceRow {
    int level = 0;
    double mesh = 0;
    std::string metric;
    double value = 0;
    double error = 0;
    double order = 0;  // NaN on the first level or when undefined
};

struct ConvergenceReport {
    std::vector<ConvergenceRow> rows;
    bool monotone = true;     // per-metric errors non-increasing across levels
    bool degenerate = false;  // consecutive levels had identical mesh
    std::string notes;

    std::vector<const ConvergenceRow*> metric_rows(const std::string& metric) const;
};

struct LabConfig {
    int grid_resolution = 32;
    bool double_resolution_per_level = false;
    int threads = 1;
};

// Continuum heat trace of the flat torus per fundamental domain.
double torus_theta_reference(const PeriodicComplex& base, int degree, double t);

// Refinement tower base, subdivide(base), subdivide^2(base), ...
std::vector<PeriodicComplex> refinement_tower(const PeriodicComplex& base, int levels);

// Sup-error of the combinatorial theta against the continuum reference over a
// log grid in the t-window, per level.
ConvergenceReport theta_convergence(const PeriodicComplex& base, int levels, FitWindow t_window,
                                    int degree, const LabConfig& cfg = {});
// Same, with an explicitly supplied tower (degenerate towers are flagged).
ConvergenceReport theta_convergence_on(const std::vector<PeriodicComplex>& tower,
                                       FitWindow t_window, int degree, const LabConfig& cfg = {});

// Bottom-of-spectrum estimates for the mass-deformed operator Delta + m^2,
// whose analytic bottom is exactly m^2. The shift is a deformation device,
// not a paper construction.
ConvergenceReport gap_convergence(const PeriodicComplex& base, int levels, double mass_shift,
                                  const LabConfig& cfg = {});

// Fitted dilation factors: smallest D >= 1 with F_comb(l) <= F_ref(D l) on the
// grid, and smallest C >= 1 with F_ref(l) <= F_comb(C l); both trend to 1.
ConvergenceReport density_sandwich(const PeriodicComplex& base, int levels,
                                   const std::vector<double>& lambda_grid,
                                   const LabConfig& cfg = {});

// Partial zeta values against the continuum reference at probes in the
// Re(s) > g/2 strip, plus the zeta(s,infinity)(0) = 0 check per level.
ConvergenceReport zeta_convergence(const PeriodicComplex& base, int levels,
                                   const std::vector<cdouble>& s_probes,
                                   const LabConfig& cfg = {});

}  // namespace specgap
