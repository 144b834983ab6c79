#pragma once

#include <complex>
#include <string>
#include <vector>

#include "specgap/spectral_functions.hpp"

// Regularized zeta functions of Delta_j - lambda_{0,j}. The Mellin transform
// of e^{lambda0 t} theta(t) is split at t = 1; the small piece is continued
// meromorphically through its heat-expansion poles, the large piece converges
// in the half-plane Re(s) < beta. Writing the combined transform near s = 0
// as a/s + b0 + O(s), the reciprocal-gamma expansion 1/Gamma(s) = s + gamma
// s^2 + ... gives zeta(0) = a and zeta'(0) = b0 + gamma a.

namespace specgap {

struct HeatExpansion {
    int n = 0;  // small-t behaviour of e^{lambda0 t} theta ~ t^{-n/2} sum c~_i t^i
    std::vector<double> c_tilde;  // c~_0 .. c~_N of the theta part; the kernel
                                  // part b e^{lambda0 t} is carried separately
    double lambda0 = 0;
    double b = 0;
    int depth() const { return static_cast<int>(c_tilde.size()) - 1; }
};

// Derives the expansion from an Atoms or ClosedForm backing. n = 0 for atoms
// (combinatorial traces are finite at t = 0); closed forms need the model
// dimension. extra_depth adds terms beyond ceil(n/2) + 1.
HeatExpansion heat_expansion_from_theta(const ThetaFunction& th, int n = 0, int extra_depth = 2);
HeatExpansion heat_expansion_from_closed_form(const ClosedFormTheta& cf, double lambda0, int n,
                                              int extra_depth = 2);

struct ZetaReport {
    int degree = 0;
    double zeta1_at_0 = 0;      // small piece at s = 0
    double zeta_inf_at_0 = 0;   // large piece at s = 0 (0 for decaying backings)
    double zeta_at_0 = 0;
    double zeta_prime_at_0 = 0;
    double log_determinant = 0;  // -zeta'(0)
    double beta_used = 0;
    std::string domain_notes;
};

// zeta^(1)(s), meromorphically continued; analytic near s = 0.
cdouble zeta_small(const ThetaFunction& th, const HeatExpansion& expansion, cdouble s);

// zeta^(inf)(s) on Re(s) < beta; zeta^(inf)(0) = 0 for decaying backings.
cdouble zeta_large(const ThetaFunction& th, cdouble s, double beta);

// Full report with zeta(0), zeta'(0) and the log determinant.
ZetaReport determinant(const ThetaFunction& th, const HeatExpansion& expansion, double beta);

// log T = sum_j j (-1)^j log|Det|(Delta_j - lambda_{0,j}); requires reports
// for every degree 0..n and positive beta throughout.
double beta_torsion_log(const std::vector<ZetaReport>& reports);

enum class ZetaPiece { Small, Large };

// Novikov-Shubin specialization: identical machinery with lambda0 forced to
// zero; the large piece is gated by Re(s) < alpha.
cdouble ns_zeta(const ThetaFunction& th, double alpha, cdouble s, ZetaPiece piece);

// Lanczos gamma for complex arguments, and a pole-safe reciprocal.
cdouble gamma_complex(cdouble z);
cdouble recip_gamma(cdouble s);

}  // namespace specgap
