#include "specgap/spectral_functions.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "specgap/kernels.hpp"

namespace specgap {

namespace {

// Regularized upper incomplete gamma Q(a, x) for a = twice_a/2 > 0, x >= 0.
double upper_q(int twice_a, double x) {
    if (x <= 0) return 1.0;
    double q, a;
    int twice = twice_a % 2 == 0 ? 2 : 1;
    if (twice == 1) {
        q = std::erfc(std::sqrt(x));
        a = 0.5;
    } else {
        q = std::exp(-x);
        a = 1.0;
    }
    while (2 * a < twice_a) {
        q += std::pow(x, a) * std::exp(-x) / std::tgamma(a + 1.0);
        a += 1.0;
    }
    return q;
}

}  // namespace

double ThetaFunction::operator()(double t) const {
    if (t <= 0) throw std::invalid_argument("theta requires t > 0");
    switch (backing) {
        case Backing::Atoms: {
            if (atom_lambda.empty()) return 0.0;
            const double w0 = atom_weight.front();
            bool uniform = true;
            for (double w : atom_weight)
                if (w != w0) {
                    uniform = false;
                    break;
                }
            if (uniform)
                return w0 * kernels::sum_exp_neg(atom_lambda.data(), atom_lambda.size(), t);
            double acc = 0;
            for (std::size_t i = 0; i < atom_lambda.size(); ++i)
                acc += atom_weight[i] * std::exp(-atom_lambda[i] * t);
            return acc;
        }
        case Backing::ClosedForm:
            return closed_form.evaluate(t);
        case Backing::Formula:
            return formula(t);
    }
    return 0;
}

double theta(const ThetaFunction& th, double t) { return th(t); }

double theta_shifted(const ThetaFunction& th, double lambda0, double t) {
    if (t <= 0) throw std::invalid_argument("theta requires t > 0");
    switch (th.backing) {
        case ThetaFunction::Backing::Atoms: {
            double acc = 0;
            for (std::size_t i = 0; i < th.atom_lambda.size(); ++i)
                acc += th.atom_weight[i] * std::exp(-(th.atom_lambda[i] - lambda0) * t);
            return acc;
        }
        case ThetaFunction::Backing::ClosedForm: {
            double acc = 0;
            for (const auto& term : th.closed_form.terms)
                acc += term.coefficient * std::pow(t, -0.5 * term.twice_power) *
                       std::exp(-(term.rate - lambda0) * t);
            return acc;
        }
        case ThetaFunction::Backing::Formula:
            if (th.formula_shifted && lambda0 == th.lambda0) return th.formula_shifted(t);
            return th.formula(t) * std::exp(lambda0 * t);
    }
    return 0;
}

double theta_truncated(const ThetaFunction& th, double nu, double t) {
    if (t <= 0) throw std::invalid_argument("theta requires t > 0");
    if (nu < 0) throw std::invalid_argument("truncation offset must be >= 0");
    const double cut = th.lambda0 + nu;
    switch (th.backing) {
        case ThetaFunction::Backing::Atoms: {
            double acc = 0;
            for (std::size_t i = 0; i < th.atom_lambda.size(); ++i)
                if (th.atom_lambda[i] > cut) acc += th.atom_weight[i] * std::exp(-th.atom_lambda[i] * t);
            return acc;
        }
        case ThetaFunction::Backing::ClosedForm: {
            // term alpha t^{-p} e^{-bt} carries the density
            // alpha (lambda-b)^{p-1}/Gamma(p) d lambda for p > 0, or an atom
            // at lambda = b for p = 0
            double acc = 0;
            for (const auto& term : th.closed_form.terms) {
                if (term.twice_power == 0) {
                    if (term.rate > cut) acc += term.coefficient * std::exp(-term.rate * t);
                } else {
                    const double x = t * std::max(0.0, cut - term.rate);
                    acc += term.coefficient * std::pow(t, -0.5 * term.twice_power) *
                           std::exp(-term.rate * t) * upper_q(term.twice_power, x);
                }
            }
            return acc;
        }
        case ThetaFunction::Backing::Formula:
            throw std::invalid_argument("truncated theta needs a spectral-measure backing");
    }
    return 0;
}

namespace {

struct LinePoints {
    std::vector<double> x, y;
};

struct LineFit {
    double slope = 0, intercept = 0;
};

LineFit least_squares(const LinePoints& P) {
    const std::size_t n = P.x.size();
    double mx = 0, my = 0;
    for (std::size_t i = 0; i < n; ++i) {
        mx += P.x[i];
        my += P.y[i];
    }
    mx /= n;
    my /= n;
    double sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < n; ++i) {
        sxx += (P.x[i] - mx) * (P.x[i] - mx);
        sxy += (P.x[i] - mx) * (P.y[i] - my);
    }
    LineFit f;
    f.slope = sxy / sxx;
    f.intercept = my - f.slope * mx;
    return f;
}

// Tightest line above (sign=+1) or below (sign=-1) the data in the
// least-squares sense: minimize sum (c + s x - y)^2 subject to
// sign*(c + s x_i - y_i) >= 0. The optimum is supported on one or two points.
LineFit envelope_fit(const LinePoints& P, int sign) {
    const std::size_t n = P.x.size();
    const double scale = 1e-11 * (1.0 + std::abs(P.y[0]));
    auto feasible = [&](double s, double c) {
        for (std::size_t i = 0; i < n; ++i)
            if (sign * (c + s * P.x[i] - P.y[i]) < -scale) return false;
        return true;
    };
    auto sse = [&](double s, double c) {
        double acc = 0;
        for (std::size_t i = 0; i < n; ++i) {
            const double r = c + s * P.x[i] - P.y[i];
            acc += r * r;
        }
        return acc;
    };

    LineFit ls = least_squares(P);
    double best_sse = std::numeric_limits<double>::infinity();
    LineFit best = ls;
    if (feasible(ls.slope, ls.intercept)) return ls;

    // single active point, slope re-optimized
    for (std::size_t i = 0; i < n; ++i) {
        double num = 0, den = 0;
        for (std::size_t j = 0; j < n; ++j) {
            const double dx = P.x[j] - P.x[i];
            num += dx * (P.y[j] - P.y[i]);
            den += dx * dx;
        }
        const double s = num / den;
        const double c = P.y[i] - s * P.x[i];
        if (feasible(s, c) && sse(s, c) < best_sse) {
            best_sse = sse(s, c);
            best = {s, c};
        }
    }
    // two active points
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) {
            if (P.x[j] == P.x[i]) continue;
            const double s = (P.y[j] - P.y[i]) / (P.x[j] - P.x[i]);
            const double c = P.y[i] - s * P.x[i];
            if (feasible(s, c) && sse(s, c) < best_sse) {
                best_sse = sse(s, c);
                best = {s, c};
            }
        }
    return best;
}

}  // namespace

BetaEstimate estimate_beta(const ThetaFunction& th, double lambda0, FitWindow window,
                           int n_points) {
    if (window.t_min <= 0 || window.t_max / window.t_min < 10.0)
        throw std::invalid_argument("fit window must span at least a decade");
    if (n_points < 8) throw std::invalid_argument("need at least 8 fit points");
    if (th.backing == ThetaFunction::Backing::Atoms && th.max_atom > 0 &&
        window.t_min < 0.1 / th.max_atom)
        throw std::invalid_argument("window reaches the combinatorial saturation regime");

    LinePoints P;
    P.x.resize(n_points);
    P.y.resize(n_points);
    for (int i = 0; i < n_points; ++i) {
        const double t =
            window.t_min * std::pow(window.t_max / window.t_min, static_cast<double>(i) / (n_points - 1));
        const double v = theta_shifted(th, lambda0, t);
        if (!(v > 0) || !std::isfinite(v))
            throw std::runtime_error("theta is not positive on the fit window");
        P.x[i] = std::log(t);
        P.y[i] = std::log(v);
    }

    const LineFit ls = least_squares(P);
    const LineFit up = envelope_fit(P, +1);
    const LineFit lo = envelope_fit(P, -1);

    BetaEstimate est;
    est.beta = -up.slope;
    est.beta_bar = -lo.slope;
    est.beta_ls = -ls.slope;
    est.window = window;
    est.lambda0 = lambda0;
    double rmax = 0;
    for (std::size_t i = 0; i < P.x.size(); ++i)
        rmax = std::max(rmax, std::abs(ls.intercept + ls.slope * P.x[i] - P.y[i]));
    est.residual = rmax;
    return est;
}

double laplace_of_density(const TabulatedDensity& G, double t) {
    if (t <= 0) throw std::invalid_argument("laplace transform requires t > 0");
    const std::size_t n = G.lambda.size();
    if (n < 2 || G.value.size() != n)
        throw std::invalid_argument("density table needs matching lambda/value arrays");
    for (std::size_t i = 1; i < n; ++i) {
        if (G.lambda[i] <= G.lambda[i - 1])
            throw std::invalid_argument("density grid must be strictly increasing");
        if (G.value[i] < G.value[i - 1] - 1e-14 * std::abs(G.value[i]))
            throw std::invalid_argument("decreasing density rejected");
    }
    const double lam0 = G.lambda.front(), Lam = G.lambda.back();

    // exact transform of the piecewise-linear interpolant
    double acc = 0;
    for (std::size_t i = 0; i + 1 < n; ++i) {
        const double dG = G.value[i + 1] - G.value[i];
        if (dG == 0) continue;
        const double a = G.lambda[i], b = G.lambda[i + 1];
        // exp(-at) - exp(-bt) without cancellation on narrow panels
        acc += dG / (b - a) * std::exp(-a * t) * (-std::expm1(-(b - a) * t)) / t;
    }

    // the untabulated tail, extrapolated at the final slope, must be
    // negligible relative to the transform
    const double end_slope = (G.value[n - 1] - G.value[n - 2]) / (G.lambda[n - 1] - G.lambda[n - 2]);
    const double tail = end_slope * std::exp(-Lam * t) / t;
    (void)lam0;
    if (tail > 1e-12 * std::abs(acc))
        throw std::invalid_argument("density table truncated too early for this t");
    return acc;
}

ThetaFunction make_theta(const SpectralSample& sample, int degree,
                         std::optional<double> kernel_tol) {
    const double tol = kernel_tol.value_or(sample.default_kernel_tol());
    const auto& D = sample.degrees.at(degree);
    const double w = sample.node_weight();

    // All sampled eigenvalues stay in: nodes carrying a kernel eigenvalue are
    // the trapezoid rule's legitimate account of the continuum modes near a
    // measure-zero character, so the trace keeps its spectral accuracy. The
    // Gamma-dimension of the kernel of the infinite operator is the weighted
    // count's refinement limit, which vanishes for these complexes; b stays 0
    // unless the caller knows better.
    ThetaFunction th;
    th.backing = ThetaFunction::Backing::Atoms;
    th.degree = degree;
    th.atom_lambda.assign(D.full.begin(), D.full.end());
    th.atom_weight.assign(th.atom_lambda.size(), w);
    th.b = 0.0;
    double lambda0 = std::numeric_limits<double>::infinity();
    for (double v : D.full) {
        if (v > tol) lambda0 = std::min(lambda0, v);
        th.max_atom = std::max(th.max_atom, v);
    }
    th.lambda0 = std::isfinite(lambda0) ? lambda0 : 0.0;
    return th;
}

ThetaFunction make_theta(const ClosedFormTheta& closed_form, int degree) {
    ThetaFunction th;
    th.backing = ThetaFunction::Backing::ClosedForm;
    th.degree = degree;
    for (const auto& term : closed_form.terms) {
        if (term.twice_power == 0 && term.rate == 0.0)
            th.b += term.coefficient;
        else
            th.closed_form.terms.push_back(term);
    }
    th.closed_form.canonicalize();
    th.lambda0 = th.closed_form.min_rate();
    return th;
}

ThetaFunction make_theta_atoms(std::vector<double> lambda, std::vector<double> weight, double b) {
    if (lambda.size() != weight.size())
        throw std::invalid_argument("atom arrays must have equal length");
    ThetaFunction th;
    th.backing = ThetaFunction::Backing::Atoms;
    th.atom_lambda = std::move(lambda);
    th.atom_weight = std::move(weight);
    th.b = b;
    double lam0 = std::numeric_limits<double>::infinity();
    for (double v : th.atom_lambda) {
        lam0 = std::min(lam0, v);
        th.max_atom = std::max(th.max_atom, v);
    }
    th.lambda0 = std::isfinite(lam0) ? lam0 : 0.0;
    return th;
}

ThetaFunction make_theta_formula(std::function<double(double)> theta_of_t, double lambda0,
                                 double b, std::function<double(double)> shifted) {
    ThetaFunction th;
    th.backing = ThetaFunction::Backing::Formula;
    th.formula = std::move(theta_of_t);
    th.formula_shifted = std::move(shifted);
    th.lambda0 = lambda0;
    th.b = b;
    return th;
}

}  // namespace specgap
