#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "specgap/bloch.hpp"
#include "specgap/hyperbolic.hpp"
#include "specgap/spectral_functions.hpp"
#include "specgap/whitney.hpp"

using namespace specgap;

namespace {
const double kSqrtPi = std::sqrt(std::numbers::pi);

// G(lambda) = (lambda - lambda0)^alpha tabulated on a graded grid
TabulatedDensity power_density(double alpha, double lambda0, double span, int pts = 6000) {
    TabulatedDensity G;
    G.lambda.push_back(lambda0);
    G.value.push_back(0.0);
    for (int i = 0; i <= pts; ++i) {
        const double x = 1e-9 * std::pow(span / 1e-9, static_cast<double>(i) / pts);
        G.lambda.push_back(lambda0 + x);
        G.value.push_back(std::pow(x, alpha));
    }
    return G;
}

// e^{lambda0 t} psi(t), the gap-shifted Stieltjes transform, overflow-safe
double laplace_shifted(const TabulatedDensity& G, double lambda0, double t) {
    double acc = 0;
    for (std::size_t i = 0; i + 1 < G.lambda.size(); ++i) {
        const double dG = G.value[i + 1] - G.value[i];
        if (dG == 0) continue;
        const double a = G.lambda[i] - lambda0, b = G.lambda[i + 1] - lambda0;
        acc += dG / (b - a) * std::exp(-a * t) * (-std::expm1(-(b - a) * t)) / t;
    }
    return acc;
}
}  // namespace

TEST_CASE("theta of a single atom is m exp(-a t)") {
    auto th = make_theta_atoms({2.0}, {3.0});
    for (double t : {0.1, 1.0, 7.0})
        CHECK(theta(th, t) == doctest::Approx(3.0 * std::exp(-2.0 * t)).epsilon(1e-14));
    CHECK_THROWS(theta(th, 0.0));
    CHECK_THROWS(theta(th, -1.0));
}

TEST_CASE("closed-form theta matches the d=5 degree-1 explicit expression") {
    auto model = make_hyperbolic_model(5, 1.0);
    auto th = make_theta(theta_hyperbolic(model, 1), 1);
    CHECK(th.lambda0 == doctest::Approx(1.0));
    CHECK(th.b == 0.0);
    for (double t : {0.3, 1.0, 4.0, 40.0}) {
        const double ref =
            4.0 * kSqrtPi * (0.75 * std::pow(t, -2.5) + 2.0 * std::pow(t, -1.5)) * std::exp(-t) +
            kSqrtPi * (0.75 * std::pow(t, -2.5) + 0.5 * std::pow(t, -1.5)) * std::exp(-4.0 * t);
        CHECK(theta(th, t) == doctest::Approx(ref).epsilon(1e-13));
    }
}

TEST_CASE("combinatorial circle theta at t=1 is 0.2821 within 2 percent") {
    auto K = build_torus_complex(1, 64, Mat::Identity(1, 1));
    std::vector<MassFamily> m;
    for (int j = 0; j <= 1; ++j) m.push_back(mass_family(K, j));
    auto S = sample_spectrum(K, m, 64);
    auto th = make_theta(S, 0);
    CHECK(theta(th, 1.0) == doctest::Approx(0.28209).epsilon(0.02));
}

TEST_CASE("theta is non-increasing for every backing") {
    std::vector<ThetaFunction> backings;
    backings.push_back(make_theta_atoms({0.5, 1.5, 3.0}, {1.0, 2.0, 0.5}));
    backings.push_back(make_theta(theta_hyperbolic(make_hyperbolic_model(5, 1.0), 2), 2));
    backings.push_back(make_theta_formula(
        [](double t) { return std::pow(4.0 * std::numbers::pi * t, -0.5); }, 0.0));
    for (const auto& th : backings) {
        double prev = std::numeric_limits<double>::infinity();
        for (int i = 0; i < 100; ++i) {
            const double t = 0.05 * std::pow(2000.0, i / 99.0);
            const double v = theta(th, t);
            CHECK(v >= 0.0);
            CHECK(v <= prev * (1.0 + 1e-12));
            prev = v;
        }
    }
}

TEST_CASE("truncated theta on atomic spectra") {
    // no spectral mass at the declared gap: truncation at nu=0 changes nothing
    auto th = make_theta_atoms({1.0, 2.0}, {1.0, 1.0});
    th.lambda0 = 0.5;
    for (double t : {0.5, 2.0})
        CHECK(theta_truncated(th, 0.0, t) == doctest::Approx(theta(th, t)).epsilon(1e-12));

    // single atom: any positive truncation removes it
    auto single = make_theta_atoms({1.5}, {2.0});
    CHECK(theta_truncated(single, 0.1, 1.0) == 0.0);

    // atoms at 1 and 2, lambda0 = 1, nu = 0.5: only the upper atom survives
    auto pair = make_theta_atoms({1.0, 2.0}, {1.0, 1.0});
    for (double t : {0.5, 1.0, 3.0})
        CHECK(theta_truncated(pair, 0.5, t) == doctest::Approx(std::exp(-2.0 * t)).epsilon(1e-13));

    // truncation removes the gap atom itself ("up to the atom at lambda0")
    CHECK(theta_truncated(pair, 0.0, 1.0) ==
          doctest::Approx(std::exp(-2.0)).epsilon(1e-13));
}

TEST_CASE("truncated theta never exceeds theta (closed-form backing)") {
    auto th = make_theta(theta_hyperbolic(make_hyperbolic_model(5, 1.0), 1), 1);
    for (double nu : {0.0, 0.5, 2.0, 5.0})
        for (double t : {0.5, 1.0, 5.0}) {
            const double tr = theta_truncated(th, nu, t);
            CHECK(tr <= theta(th, t) * (1.0 + 1e-12));
            CHECK(tr >= 0.0);
        }
    // truncating past every rate leaves only Gaussian-tail mass
    CHECK(theta_truncated(th, 10.0, 5.0) < 1e-6 * theta(th, 5.0));
}

TEST_CASE("beta estimation recovers exact power laws") {
    for (double lambda0 : {0.0, 1.0}) {
        auto th = make_theta_formula(
            [lambda0](double t) { return std::pow(t, -1.5) * std::exp(-lambda0 * t); }, lambda0,
            0.0, [](double t) { return std::pow(t, -1.5); });
        auto est = estimate_beta(th, lambda0, {10.0, 1000.0}, 64);
        CHECK(est.beta == doctest::Approx(1.5).epsilon(0.02 / 1.5));
        CHECK(est.beta_bar == doctest::Approx(1.5).epsilon(0.02 / 1.5));
        CHECK(est.residual <= 1e-10);
        CHECK(est.beta <= est.beta_bar + 1e-9);
    }
}

TEST_CASE("beta of the d=5 model: 3/2 below the middle degree, 1/2 at it") {
    auto model = make_hyperbolic_model(5, 1.0);
    auto th1 = make_theta(theta_hyperbolic(model, 1), 1);
    auto est1 = estimate_beta(th1, th1.lambda0, {10.0, 1000.0}, 64);
    CHECK(std::abs(est1.beta - 1.5) <= 0.05);
    CHECK(std::abs(est1.beta_ls - 1.5) <= 0.05);

    auto th2 = make_theta(theta_hyperbolic(model, 2), 2);
    auto est2 = estimate_beta(th2, 0.0, {10.0, 1000.0}, 64);
    CHECK(std::abs(est2.beta - 0.5) <= 0.05);
}

TEST_CASE("beta estimation guards") {
    auto th = make_theta_atoms({1.0, 5.0, 100.0}, {1.0, 1.0, 1.0});
    CHECK_THROWS(estimate_beta(th, 0.0, {10.0, 50.0}, 64));     // window under a decade
    CHECK_THROWS(estimate_beta(th, 0.0, {1e-5, 10.0}, 64));    // saturation regime
    auto neg = make_theta_formula([](double t) { return 1.0 - t; }, 0.0);
    CHECK_THROWS(estimate_beta(neg, 0.0, {10.0, 1000.0}, 64));  // theta not positive
}

TEST_CASE("beta ordering: upper envelope never exceeds the lower one by more than tolerance") {
    auto model = make_hyperbolic_model(7, 1.0);
    for (int j = 0; j <= 3; ++j) {
        auto th = make_theta(theta_hyperbolic(model, j), j);
        auto est = estimate_beta(th, th.lambda0, {10.0, 1000.0}, 64);
        CHECK(est.beta <= est.beta_bar + 4.0 * est.residual + 1e-9);
    }
}

TEST_CASE("Laplace transform of a unit step is exp(-lambda0 t)") {
    TabulatedDensity G;
    G.lambda = {1.0, 1.0 + 1e-12, 6.0};
    G.value = {0.0, 1.0, 1.0};
    for (double t : {2.0, 5.0})
        CHECK(laplace_of_density(G, t) == doctest::Approx(std::exp(-t)).epsilon(1e-9));
}

TEST_CASE("Laplace transform of a power density matches the Gamma formula") {
    // G = (lambda-1)^{1/2}: psi(t) = Gamma(3/2) e^{-t} t^{-1/2}
    auto G = power_density(0.5, 1.0, 20.0, 20000);
    const double t = 2.0;
    const double ref = std::tgamma(1.5) * std::exp(-t) * std::pow(t, -0.5);
    CHECK(laplace_of_density(G, t) == doctest::Approx(ref).epsilon(1e-6));
    // decreasing in t and positive
    CHECK(laplace_of_density(G, 3.0) < laplace_of_density(G, 2.0));
}

TEST_CASE("decreasing densities and truncated tails are rejected") {
    TabulatedDensity bad;
    bad.lambda = {0.0, 1.0, 2.0};
    bad.value = {0.0, 1.0, 0.5};
    CHECK_THROWS(laplace_of_density(bad, 1.0));
    TabulatedDensity shortG;
    shortG.lambda = {0.0, 0.5};
    shortG.value = {0.0, 1.0};
    CHECK_THROWS(laplace_of_density(shortG, 1.0));  // e^{-0.5 t} tail not negligible
}

TEST_CASE("Tauberian recovery: the beta estimator inverts the Laplace transform") {
    for (double alpha : {0.5, 1.0, 1.5, 2.5}) {
        for (double lambda0 : {0.0, 1.0}) {
            auto G = power_density(alpha, lambda0, 8.0);
            auto psi = make_theta_formula(
                [G](double t) { return laplace_of_density(G, t); }, lambda0, 0.0,
                [G, lambda0](double t) { return laplace_shifted(G, lambda0, t); });
            auto est = estimate_beta(psi, lambda0, {10.0, 1000.0}, 48);
            CHECK(std::abs(est.beta_ls - alpha) <= 0.02);
            CHECK(std::abs(est.beta - alpha) <= 0.02);
            CHECK(std::abs(est.beta_bar - alpha) <= 0.02);
        }
    }
}

TEST_CASE("round-trip: psi = Gamma(a+1) e^{-l0 t} t^{-a} recovered to 0.02") {
    // direct analytic transform, the estimator alone under test
    const double alpha = 0.5, lambda0 = 1.0;
    auto psi = make_theta_formula(
        [=](double t) { return std::tgamma(alpha + 1.0) * std::exp(-lambda0 * t) * std::pow(t, -alpha); },
        lambda0, 0.0,
        [=](double t) { return std::tgamma(alpha + 1.0) * std::pow(t, -alpha); });
    auto est = estimate_beta(psi, lambda0, {10.0, 1000.0}, 48);
    CHECK(std::abs(est.beta - alpha) <= 0.02);
}

TEST_CASE("appendix bound: every gapped model has beta_0 >= 0.95") {
    std::vector<ThetaFunction> zoo;
    for (int d : {3, 5, 7})
        zoo.push_back(make_theta(theta_hyperbolic(make_hyperbolic_model(d, 1.0), 0), 0));
    {
        auto h3 = make_hyperbolic_model(3, 1.0);
        std::vector<ClosedFormTheta> f;
        for (int j = 0; j <= 3; ++j) f.push_back(theta_hyperbolic(h3, j));
        zoo.push_back(make_theta(product_theta(f, f, 0), 0));
    }
    for (const auto& th : zoo) {
        CHECK(th.lambda0 > 0.0);
        auto est = estimate_beta(th, th.lambda0, {10.0, 1000.0}, 64);
        CHECK(est.beta >= 0.95);
        CHECK(est.beta_bar >= 0.95);
    }
}

TEST_CASE("product of two 3-dimensional models has beta_0 = 3") {
    auto h3 = make_hyperbolic_model(3, 1.0);
    std::vector<ClosedFormTheta> f;
    for (int j = 0; j <= 3; ++j) f.push_back(theta_hyperbolic(h3, j));
    auto p0 = make_theta(product_theta(f, f, 0), 0);
    CHECK(p0.lambda0 == doctest::Approx(2.0));
    auto est = estimate_beta(p0, p0.lambda0, {10.0, 1000.0}, 64);
    CHECK(std::abs(est.beta - 3.0) <= 0.1);
}
