#pragma once

#include <cstdint>
#include <vector>

// Closed-form spectral engine for closed hyperbolic manifolds of odd
// dimension d = 2n+1. Heat traces are finite sums of terms
// alpha * t^(-p) * exp(-b t) with half-integer powers p, obtained by Gaussian
// moments of the Plancherel polynomials. The family is closed under products,
// which covers product manifolds with the product metric.

namespace specgap {

// One exponential-polynomial term alpha * t^(-twice_power/2) * exp(-rate*t).
struct ThetaTerm {
    double coefficient = 0;
    int twice_power = 0;  // 2p, p >= 0
    double rate = 0;      // b >= 0
};

struct ClosedFormTheta {
    std::vector<ThetaTerm> terms;

    double evaluate(double t) const;
    // Minimum exponential rate = spectral gap lambda_0 of the backing.
    double min_rate() const;
    // A term with p = 0 and b = 0 is a nonzero constant at infinity
    // (an L^2 Betti contribution); such backings are not L^2-acyclic.
    bool has_constant_term() const;
    // Merge equal (p, b) keys and sort by (rate, power).
    void canonicalize();

    friend ClosedFormTheta operator*(const ClosedFormTheta& a, const ClosedFormTheta& b);
    friend ClosedFormTheta operator+(const ClosedFormTheta& a, const ClosedFormTheta& b);
};

struct HyperbolicModel {
    int d = 3;          // odd dimension >= 3
    double volume = 1;  // hyperbolic volume units

    int half() const { return (d - 1) / 2; }  // n = (d-1)/2
    // a_j = binom(d-1, j) * volume
    double a_coefficient(int j) const;
    // c_j = n - j
    int c_coefficient(int j) const { return half() - j; }
};

HyperbolicModel make_hyperbolic_model(int d, double volume);

// Plancherel polynomial P_{sigma_j} as exact integer coefficients against
// nu^0, nu^2, nu^4, ...; the factor at k = n-j is cancelled symbolically.
std::vector<std::int64_t> plancherel_poly(int d, int j);

// I_t(sigma_j) via exact Gaussian moments; all term rates equal c_j^2.
ClosedFormTheta i_t_sigma(const HyperbolicModel& model, int j);

// theta_j = I_t(sigma_j) + I_t(sigma_{j-1}) for j <= n, degrees above n by
// Hodge duality theta_j = theta_{d-j}.
ClosedFormTheta theta_hyperbolic(const HyperbolicModel& model, int degree);

// Kuenneth composition theta_k = sum_{i+j=k} theta_i^A theta_j^B for
// L^2-acyclic factors. A has degrees 0..dA, B degrees 0..dB.
ClosedFormTheta product_theta(const std::vector<ClosedFormTheta>& factor_a,
                              const std::vector<ClosedFormTheta>& factor_b, int degree);

// log |Det_tau|(Delta_j - lambda_{0,j}) through the zeta pipeline.
double determinant_hyperbolic(const HyperbolicModel& model, int degree);

}  // namespace specgap
