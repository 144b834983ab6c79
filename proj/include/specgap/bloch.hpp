#pragma once

#include <optional>
#include <string>
#include <vector>

#include "specgap/complex.hpp"
#include "specgap/whitney.hpp"

// Character-twisted combinatorial Laplacians and their spectra sampled over
// the character torus [0,2pi)^g. The von Neumann trace of f(Delta_j) is the
// weighted average over characters of tr f(Delta_j(k)).

namespace specgap {

struct TwistedOperatorFamily {
    int degree = 0;
    const PeriodicComplex* complex = nullptr;
    std::optional<MassFamily> mass_below;  // degree j-1, absent at the bottom
    MassFamily mass_here;                  // degree j
    std::optional<MassFamily> mass_above;  // degree j+1, absent at the top

    // Stiffness A_j(k) and mass M_j(k); the pencil A v = lambda M v represents
    // the combinatorial Laplacian. Self-adjoint in the M_j(k) inner product.
    std::pair<CMat, CMat> evaluate(const Vec& k) const;

    // Up-part stiffness d_j(k)^* M_{j+1}(k) d_j(k) alone (delta d).
    CMat evaluate_up(const Vec& k) const;
};

TwistedOperatorFamily assemble_laplacian(const PeriodicComplex& complex,
                                         const std::vector<MassFamily>& masses, int degree);

// Eigenvalue lists over a tensor trapezoid grid on the character torus.
struct SpectralSample {
    int rank = 0;
    int resolution = 0;  // nodes per axis; node weight = resolution^-rank
    int n_nodes = 0;
    std::string complex_id;
    double max_eigenvalue = 0;
    double max_adjacent_gap = 0;  // continuity monitor along the first axis

    struct DegreeData {
        int dim = 0;               // matrix size = #j-cells
        std::vector<double> full;  // node-major ascending eigenvalues of Delta_j(k)
        std::vector<double> up;    // node-major ascending eigenvalues of (delta d)_j(k)
    };
    std::vector<DegreeData> degrees;

    double node_weight() const;
    Vec node_character(int node) const;
    double default_kernel_tol() const { return 1e-10 * max_eigenvalue; }
};

// Solves every character node; degrees 0..g. grid_resolution >= 2.
SpectralSample sample_spectrum(const PeriodicComplex& complex,
                               const std::vector<MassFamily>& masses, int grid_resolution,
                               int threads = 1);

// tau(e^{-t Delta_j}) for the sampled spectrum.
double vn_heat_trace(const SpectralSample& sample, int degree, double t);

// Integrated eigenvalue-counting functions (closed intervals).
// N-bar_j: full counting including the kernel.
double spectral_density_full(const SpectralSample& sample, int degree, double lambda);
// F_j: counting for delta_j d_j restricted to (ker d_j)^perp.
double spectral_density_f(const SpectralSample& sample, int degree, double lambda,
                          std::optional<double> kernel_tol = std::nullopt);
// N_j = F_{j-1} + F_j.
double spectral_density_n(const SpectralSample& sample, int degree, double lambda,
                          std::optional<double> kernel_tol = std::nullopt);

struct DegreeSummary {
    double lambda0 = 0;     // bottom of spectrum above the kernel
    double kernel_dim = 0;  // Gamma-dimension estimate of ker Delta_j
    double kappa0 = 0;      // bottom of (delta d)_j on (ker d_j)^perp
    double kernel_tol = 0;
};

struct SpectrumSummary {
    std::vector<DegreeSummary> per_degree;
};

SpectrumSummary spectrum_summary(const SpectralSample& sample,
                                 std::optional<double> kernel_tol = std::nullopt);

// Eigenvalues shifted by a constant mass term m^2 (deformation, not a paper
// construction); used by the gap-convergence laboratory.
SpectralSample shift_spectrum(const SpectralSample& sample, double mass_squared);

}  // namespace specgap
