#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "specgap/bloch.hpp"
#include "specgap/hyperbolic.hpp"

// Theta functions theta_j(t) = tau(e^{-t Delta_j}) - b_j, truncated thetas,
// and the gap-shifted decay invariants beta / beta-bar estimated by envelope
// regression of log(e^{lambda0 t} theta(t)) against log t.

namespace specgap {

struct ThetaFunction {
    enum class Backing { Atoms, ClosedForm, Formula };

    Backing backing = Backing::Atoms;
    int degree = 0;
    double b = 0;        // subtracted kernel dimension (L2 Betti contribution)
    double lambda0 = 0;  // spectral gap above the kernel

    // Atoms: discrete spectral measure above the kernel.
    std::vector<double> atom_lambda;
    std::vector<double> atom_weight;

    // ClosedForm: exponential-polynomial term list (constant term removed
    // into b).
    ClosedFormTheta closed_form;

    // Formula: tabulated/continuum backing, value of theta(t) directly.
    std::function<double(double)> formula;
    // Optional overflow-safe evaluator of e^{lambda0 t} theta(t) for gapped
    // formula backings.
    std::function<double(double)> formula_shifted;

    double max_atom = 0;  // largest eigenvalue, 0 when not applicable

    double operator()(double t) const;
};

// e^{lambda0 t} theta(t), evaluated without overflow by shifting the rates
// inside the backing.
double theta_shifted(const ThetaFunction& th, double lambda0, double t);

// theta(t); value >= 0, non-increasing, -> 0 as t -> infinity.
double theta(const ThetaFunction& th, double t);

// Truncated theta: Stieltjes integral of e^{-lambda t} over the open interval
// (lambda0 + nu, infinity) of the spectral measure.
double theta_truncated(const ThetaFunction& th, double nu, double t);

struct FitWindow {
    double t_min = 10.0;
    double t_max = 1000.0;
};

struct BetaEstimate {
    double beta = 0;      // negated slope of the tight upper envelope
    double beta_bar = 0;  // negated slope of the tight lower envelope
    double beta_ls = 0;   // negated least-squares slope
    FitWindow window;
    double residual = 0;  // max |least-squares residual| over the fit grid
    double lambda0 = 0;
};

BetaEstimate estimate_beta(const ThetaFunction& th, double lambda0, FitWindow window,
                           int n_points = 64);

// Non-decreasing tabulated density on [lambda0, Lambda].
struct TabulatedDensity {
    std::vector<double> lambda;
    std::vector<double> value;
};

// psi(t) = int e^{-lambda t} dG(lambda), piecewise-linear Stieltjes rule.
double laplace_of_density(const TabulatedDensity& G, double t);

// Theta backings.
ThetaFunction make_theta(const SpectralSample& sample, int degree,
                         std::optional<double> kernel_tol = std::nullopt);
ThetaFunction make_theta(const ClosedFormTheta& closed_form, int degree = 0);
ThetaFunction make_theta_atoms(std::vector<double> lambda, std::vector<double> weight, double b = 0);
ThetaFunction make_theta_formula(std::function<double(double)> theta_of_t, double lambda0,
                                 double b = 0,
                                 std::function<double(double)> shifted = nullptr);

}  // namespace specgap
