#include "specgap/hyperbolic.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <stdexcept>

#include "specgap/spectral_functions.hpp"
#include "specgap/zeta.hpp"

namespace specgap {

double ClosedFormTheta::evaluate(double t) const {
    if (t <= 0) throw std::invalid_argument("theta evaluation requires t > 0");
    double acc = 0;
    for (const auto& term : terms)
        acc += term.coefficient * std::pow(t, -0.5 * term.twice_power) * std::exp(-term.rate * t);
    return acc;
}

double ClosedFormTheta::min_rate() const {
    double r = std::numeric_limits<double>::infinity();
    for (const auto& term : terms) r = std::min(r, term.rate);
    return terms.empty() ? 0.0 : r;
}

bool ClosedFormTheta::has_constant_term() const {
    for (const auto& term : terms)
        if (term.twice_power == 0 && term.rate == 0.0 && term.coefficient != 0.0) return true;
    return false;
}

void ClosedFormTheta::canonicalize() {
    std::map<std::pair<double, int>, double> acc;
    for (const auto& term : terms) acc[{term.rate, term.twice_power}] += term.coefficient;
    terms.clear();
    for (const auto& [key, c] : acc)
        if (c != 0.0) terms.push_back({c, key.second, key.first});
}

ClosedFormTheta operator*(const ClosedFormTheta& a, const ClosedFormTheta& b) {
    ClosedFormTheta out;
    out.terms.reserve(a.terms.size() * b.terms.size());
    for (const auto& ta : a.terms)
        for (const auto& tb : b.terms)
            out.terms.push_back(
                {ta.coefficient * tb.coefficient, ta.twice_power + tb.twice_power, ta.rate + tb.rate});
    out.canonicalize();
    return out;
}

ClosedFormTheta operator+(const ClosedFormTheta& a, const ClosedFormTheta& b) {
    ClosedFormTheta out = a;
    out.terms.insert(out.terms.end(), b.terms.begin(), b.terms.end());
    out.canonicalize();
    return out;
}

double HyperbolicModel::a_coefficient(int j) const {
    double binom = 1;
    for (int i = 0; i < j; ++i) binom = binom * (d - 1 - i) / (i + 1);
    return binom * volume;
}

HyperbolicModel make_hyperbolic_model(int d, double volume) {
    if (d < 3 || d % 2 == 0) throw std::invalid_argument("dimension must be odd and >= 3");
    if (volume <= 0) throw std::invalid_argument("volume must be positive");
    return HyperbolicModel{d, volume};
}

std::vector<std::int64_t> plancherel_poly(int d, int j) {
    const int n = (d - 1) / 2;
    if (j < 0 || j > n) throw std::invalid_argument("plancherel degree out of range");
    // product over k of (x + k^2) in x = nu^2
    std::vector<std::int64_t> poly{1};
    for (int k = 0; k <= n; ++k) {
        if (k == n - j) continue;  // symbolic cancellation of the (x+(n-j)^2) factor
        const std::int64_t k2 = static_cast<std::int64_t>(k) * k;
        std::vector<std::int64_t> next(poly.size() + 1, 0);
        for (std::size_t i = 0; i < poly.size(); ++i) {
            next[i] += poly[i] * k2;
            next[i + 1] += poly[i];
        }
        poly = std::move(next);
    }
    return poly;
}

ClosedFormTheta i_t_sigma(const HyperbolicModel& model, int j) {
    const auto poly = plancherel_poly(model.d, j);
    const double aj = model.a_coefficient(j);
    const int cj = model.c_coefficient(j);

    ClosedFormTheta out;
    // int exp(-t nu^2) nu^{2m} d nu = Gamma(m + 1/2) t^{-m-1/2},
    // Gamma(m+1/2) = sqrt(pi) (2m-1)!! / 2^m
    double gamma_half = std::sqrt(std::numbers::pi);
    for (std::size_t m = 0; m < poly.size(); ++m) {
        if (poly[m] != 0)
            out.terms.push_back({aj * static_cast<double>(poly[m]) * gamma_half,
                                 static_cast<int>(2 * m + 1), static_cast<double>(cj) * cj});
        gamma_half *= (static_cast<double>(m) + 0.5);
    }
    out.canonicalize();
    return out;
}

ClosedFormTheta theta_hyperbolic(const HyperbolicModel& model, int degree) {
    if (degree < 0 || degree > model.d) throw std::invalid_argument("degree out of range");
    const int n = model.half();
    const int j = degree > n ? model.d - degree : degree;
    ClosedFormTheta out = i_t_sigma(model, j);
    if (j > 0) out = out + i_t_sigma(model, j - 1);
    return out;
}

ClosedFormTheta product_theta(const std::vector<ClosedFormTheta>& factor_a,
                              const std::vector<ClosedFormTheta>& factor_b, int degree) {
    if (factor_a.empty() || factor_b.empty())
        throw std::invalid_argument("product requires complete factor lists");
    for (const auto& th : factor_a)
        if (th.has_constant_term()) throw std::invalid_argument("factor is not L2-acyclic");
    for (const auto& th : factor_b)
        if (th.has_constant_term()) throw std::invalid_argument("factor is not L2-acyclic");
    ClosedFormTheta out;
    const int da = static_cast<int>(factor_a.size()) - 1;
    const int db = static_cast<int>(factor_b.size()) - 1;
    if (degree < 0 || degree > da + db) throw std::invalid_argument("degree out of range");
    for (int i = 0; i <= degree; ++i) {
        const int j = degree - i;
        if (i > da || j > db) continue;
        out = out + factor_a[i] * factor_b[j];
    }
    return out;
}

double determinant_hyperbolic(const HyperbolicModel& model, int degree) {
    ClosedFormTheta th = theta_hyperbolic(model, degree);
    ThetaFunction theta = make_theta(th);
    HeatExpansion expansion = heat_expansion_from_closed_form(th, theta.lambda0, model.d);
    BetaEstimate beta = estimate_beta(theta, theta.lambda0, {10.0, 1000.0}, 64);
    ZetaReport report = determinant(theta, expansion, beta.beta);
    return report.log_determinant;
}

}  // namespace specgap
