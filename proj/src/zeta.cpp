#include "specgap/zeta.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "specgap/whitney.hpp"

namespace specgap {

namespace {

constexpr double kEulerGamma = 0.57721566490153286061;

// ----------------------------------------------------------------------
// incomplete Mellin transform  incmel(z, mu) = int_0^1 t^{z-1} e^{-mu t} dt,
// analytically continued in z
// ----------------------------------------------------------------------

cdouble incmel(cdouble z, double mu) {
    if (mu == 0.0) return 1.0 / z;
    if (mu <= 20.0) {
        // sum_k (-mu)^k / k! / (z + k); safe for |mu| <= 20, and for mu < 0
        // all terms are positive
        cdouble acc = 0;
        double coef = 1.0;
        for (int k = 0; k < 400; ++k) {
            acc += coef / (z + static_cast<double>(k));
            coef *= -mu / (k + 1);
            if (std::abs(coef) < 1e-18 * (1.0 + std::abs(acc)) && k > std::abs(mu)) break;
        }
        return acc;
    }
    // incmel = Gamma(z) mu^{-z} - int_1^inf; the tail is < e^{-mu} < 2e-9
    return gamma_complex(z) * std::pow(cdouble(mu), -z);
}

struct Laurent {
    double pole = 0;    // coefficient of 1/s
    double finite = 0;  // constant term at s = 0
};

// sum_{k>=1} (-mu)^k / (k! k) = -gamma - log(mu) - E1(mu) for mu > 0
double incmel_finite_part(double mu) {
    if (mu == 0.0) return 0.0;
    if (mu <= 20.0) {
        double acc = 0, coef = 1.0;
        for (int k = 1; k <= 400; ++k) {
            coef *= -mu / k;
            acc += coef / k;
            if (std::abs(coef) < 1e-18 * (1.0 + std::abs(acc)) && k > std::abs(mu)) break;
        }
        return acc;
    }
    return -kEulerGamma - std::log(mu);  // E1(mu) < e^{-20} dropped
}

// Laurent expansion at s = 0 of incmel(s - p, mu), p = twice_p / 2 >= 0.
Laurent incmel_laurent(int twice_p, double mu) {
    Laurent L;
    if (twice_p % 2 == 1) {
        // half-integer power: analytic at s = 0
        L.finite = incmel(cdouble(-0.5 * twice_p), mu).real();
        return L;
    }
    const int p = twice_p / 2;
    if (mu == 0.0) {
        // incmel = 1/(s-p)
        if (p == 0)
            L.pole = 1.0;
        else
            L.finite = -1.0 / p;
        return L;
    }
    if (p == 0) {
        L.pole = 1.0;
        L.finite = incmel_finite_part(mu);
        return L;
    }
    // integer p >= 1: the k = p series term carries the pole
    double coef = 1.0;  // (-mu)^k / k!
    for (int k = 1; k <= p; ++k) coef *= -mu / k;
    L.pole = coef;
    if (mu <= 20.0) {
        double acc = 0, c = 1.0;
        for (int k = 0; k <= 400; ++k) {
            if (k != p) acc += c / (k - p);
            c *= -mu / (k + 1);
            if (std::abs(c) < 1e-18 * (1.0 + std::abs(acc)) && k > std::abs(mu) && k > p) break;
        }
        L.finite = acc;
    } else {
        double harmonic = 0;
        for (int m = 1; m <= p; ++m) harmonic += 1.0 / m;
        L.finite = coef * ((-kEulerGamma + harmonic) - std::log(mu));
    }
    return L;
}

// ----------------------------------------------------------------------
// quadrature helpers
// ----------------------------------------------------------------------

const std::vector<double>& gl_nodes() {
    static std::vector<double> x, w;
    if (x.empty()) gauss_legendre_01(24, x, w);
    return x;
}
const std::vector<double>& gl_weights() {
    static std::vector<double> x, w;
    if (w.empty()) gauss_legendre_01(24, x, w);
    return w;
}

template <typename F>
cdouble integrate_panel(const F& f, double a, double b) {
    const auto& x = gl_nodes();
    const auto& w = gl_weights();
    cdouble acc = 0;
    for (std::size_t i = 0; i < x.size(); ++i) acc += w[i] * f(a + (b - a) * x[i]);
    return acc * (b - a);
}

// int_lo^hi f(t) dt over geometrically split panels
template <typename F>
cdouble integrate_log_panels(const F& f, double lo, double hi) {
    cdouble acc = 0;
    double a = lo;
    while (a < hi) {
        double b = std::min(hi, 2.0 * a);
        acc += integrate_panel(f, a, b);
        a = b;
    }
    return acc;
}

// ----------------------------------------------------------------------
// small piece: exact Mellin of e^{lambda0 t} theta(t) over [0,1]
// ----------------------------------------------------------------------

void check_expansion(const ThetaFunction& th, const HeatExpansion& expansion) {
    if (2 * expansion.depth() < expansion.n + 2)
        throw std::invalid_argument("heat expansion too shallow: need depth N >= n/2 + 1");
    if (th.backing == ThetaFunction::Backing::Formula) return;
    HeatExpansion derived = heat_expansion_from_theta(
        th, expansion.n, expansion.depth() - (expansion.n + 1) / 2 - 1);
    double scale = 1.0;
    for (double c : derived.c_tilde) scale = std::max(scale, std::abs(c));
    const int m = static_cast<int>(std::min(derived.c_tilde.size(), expansion.c_tilde.size()));
    for (int i = 0; i < m; ++i)
        if (std::abs(derived.c_tilde[i] - expansion.c_tilde[i]) > 1e-6 * scale)
            throw std::runtime_error("heat expansion does not match the theta backing");
}

// e^{lambda0 t} theta(t) minus the truncated expansion (Formula backings).
double formula_remainder(const ThetaFunction& th, const HeatExpansion& expansion, double t) {
    double sub = 0, tp = std::pow(t, -0.5 * expansion.n);
    for (int i = 0; i <= expansion.depth(); ++i) {
        sub += expansion.c_tilde[i] * tp;
        tp *= t;
    }
    return theta_shifted(th, th.lambda0, t) - sub;
}

void check_formula_decay(const ThetaFunction& th, const HeatExpansion& expansion, double re_s) {
    const double r1 = std::abs(formula_remainder(th, expansion, 1e-2));
    const double r2 = std::abs(formula_remainder(th, expansion, 1e-3));
    const double expo = (r2 > 0 && r1 > 0) ? std::log(r1 / r2) / std::log(10.0) : 10.0;
    if (expo + re_s <= 0.0)
        throw std::runtime_error(
            "remainder does not decay like t^{N-n/2}: expansion/theta mismatch");
}

// integral over [~0, 1] of t^{s-1} * formula_remainder
cdouble formula_remainder_mellin(const ThetaFunction& th, const HeatExpansion& expansion,
                                 cdouble s) {
    auto integrand = [&](double t) {
        return std::pow(cdouble(t), s - 1.0) * formula_remainder(th, expansion, t);
    };
    cdouble rem = 0;
    double a = 1.0;
    for (int m = 0; m < 48; ++m) {
        rem += integrate_panel(integrand, 0.5 * a, a);
        a *= 0.5;
    }
    return rem;
}

cdouble mellin_small(const ThetaFunction& th, const HeatExpansion& expansion, cdouble s) {
    switch (th.backing) {
        case ThetaFunction::Backing::Atoms: {
            cdouble acc = 0;
            for (std::size_t i = 0; i < th.atom_lambda.size(); ++i)
                acc += th.atom_weight[i] * incmel(s, th.atom_lambda[i] - th.lambda0);
            return acc;
        }
        case ThetaFunction::Backing::ClosedForm: {
            cdouble acc = 0;
            for (const auto& term : th.closed_form.terms)
                acc += term.coefficient *
                       incmel(s - 0.5 * term.twice_power, term.rate - th.lambda0);
            return acc;
        }
        case ThetaFunction::Backing::Formula: {
            if (s.real() <= 0.5 * expansion.n + 0.25)
                check_formula_decay(th, expansion, s.real());
            cdouble poles = 0;
            for (int i = 0; i <= expansion.depth(); ++i)
                poles += expansion.c_tilde[i] / (s + (i - 0.5 * expansion.n));
            return poles + formula_remainder_mellin(th, expansion, s);
        }
    }
    return 0;
}

Laurent mellin_small_laurent(const ThetaFunction& th, const HeatExpansion& expansion) {
    Laurent L;
    switch (th.backing) {
        case ThetaFunction::Backing::Atoms: {
            for (std::size_t i = 0; i < th.atom_lambda.size(); ++i) {
                const double mu = th.atom_lambda[i] - th.lambda0;
                L.pole += th.atom_weight[i];
                L.finite += th.atom_weight[i] * incmel_finite_part(mu);
            }
            return L;
        }
        case ThetaFunction::Backing::ClosedForm: {
            for (const auto& term : th.closed_form.terms) {
                Laurent t = incmel_laurent(term.twice_power, term.rate - th.lambda0);
                L.pole += term.coefficient * t.pole;
                L.finite += term.coefficient * t.finite;
            }
            return L;
        }
        case ThetaFunction::Backing::Formula: {
            const int n = expansion.n;
            const int N = expansion.depth();
            check_formula_decay(th, expansion, 0.0);
            if (n % 2 == 0 && n / 2 <= N) L.pole += expansion.c_tilde[n / 2];
            for (int i = 0; i <= N; ++i)
                if (2 * i != n) L.finite += expansion.c_tilde[i] / (i - 0.5 * n);
            L.finite += formula_remainder_mellin(th, expansion, cdouble(0.0)).real();
            return L;
        }
    }
    return L;
}

// ----------------------------------------------------------------------
// large piece
// ----------------------------------------------------------------------

cdouble mellin_large(const ThetaFunction& th, cdouble s, double beta, bool at_zero,
                     double* pole_out) {
    if (pole_out) *pole_out = 0;
    switch (th.backing) {
        case ThetaFunction::Backing::Atoms: {
            std::vector<double> mu, w;
            double bottom_mass = 0;
            double mu_min = std::numeric_limits<double>::infinity();
            for (std::size_t i = 0; i < th.atom_lambda.size(); ++i) {
                const double m = th.atom_lambda[i] - th.lambda0;
                if (m == 0.0) {
                    // an exact atom at the bottom: pure power t^0, regularized
                    bottom_mass += th.atom_weight[i];
                } else {
                    // solver noise may leave tiny or negative shifts; keep the
                    // tail integrable
                    mu.push_back(std::max(m, 1e-13));
                    w.push_back(th.atom_weight[i]);
                    mu_min = std::min(mu_min, mu.back());
                }
            }
            cdouble acc = 0;
            if (bottom_mass != 0) {
                if (pole_out)
                    *pole_out = -bottom_mass;
                else
                    acc += -bottom_mass / s;  // continued int_1^inf t^{s-1} dt
            }
            if (!mu.empty()) {
                const double T = 1.0 + 60.0 / mu_min;
                auto f = [&](double t) {
                    double g = 0;
                    for (std::size_t i = 0; i < mu.size(); ++i)
                        g += w[i] * std::exp(-mu[i] * t);
                    return at_zero ? cdouble(g / t) : std::pow(cdouble(t), s - 1.0) * g;
                };
                acc += integrate_log_panels(f, 1.0, T);
            }
            return acc;
        }
        case ThetaFunction::Backing::ClosedForm: {
            cdouble acc = 0;
            for (const auto& term : th.closed_form.terms) {
                const double mu = term.rate - th.lambda0;
                const double p = 0.5 * term.twice_power;
                if (std::abs(mu) <= 1e-12 * (1.0 + th.lambda0)) {
                    // pure power: int_1^inf t^{s-p-1} dt = -1/(s-p), continued
                    if (term.twice_power == 0) {
                        if (pole_out)
                            *pole_out += -term.coefficient;
                        else
                            acc += -term.coefficient / s;
                    } else {
                        acc += at_zero ? cdouble(term.coefficient / p)
                                       : -term.coefficient / (s - p);
                    }
                } else {
                    const double T = 1.0 + 60.0 / mu;
                    auto f = [&](double t) {
                        const double g = std::pow(t, -p) * std::exp(-mu * t);
                        return at_zero ? cdouble(g / t) : std::pow(cdouble(t), s - 1.0) * g;
                    };
                    acc += term.coefficient * integrate_log_panels(f, 1.0, T);
                }
            }
            return acc;
        }
        case ThetaFunction::Backing::Formula: {
            const double T = 1e6;
            auto f = [&](double t) {
                const double g = theta_shifted(th, th.lambda0, t);
                return at_zero ? cdouble(g / t) : std::pow(cdouble(t), s - 1.0) * g;
            };
            cdouble main = integrate_log_panels(f, 1.0, T);
            cdouble doubled = main + integrate_log_panels(f, T, 2.0 * T);
            if (std::abs(doubled - main) > 1e-8 * (1.0 + std::abs(main)) + 1e-10)
                throw std::runtime_error("theta tail is not integrable on [1, inf)");
            // power-law tail model g(t) ~ g(2T) (t/2T)^{-beta}
            const double g2 = theta_shifted(th, th.lambda0, 2.0 * T);
            cdouble tail = g2 * std::pow(cdouble(2.0 * T), s) / (beta - s);
            return doubled + tail;
        }
    }
    return 0;
}

}  // namespace

// ----------------------------------------------------------------------
// public surface
// ----------------------------------------------------------------------

cdouble gamma_complex(cdouble z) {
    static const double g[9] = {0.99999999999980993,    676.5203681218851,     -1259.1392167224028,
                                771.32342877765313,     -176.61502916214059,   12.507343278686905,
                                -0.13857109526572012,   9.9843695780195716e-6, 1.5056327351493116e-7};
    const double pi = std::numbers::pi;
    if (z.real() < 0.5) return pi / (std::sin(pi * z) * gamma_complex(1.0 - z));
    z -= 1.0;
    cdouble x = g[0];
    for (int i = 1; i < 9; ++i) x += g[i] / (z + static_cast<double>(i));
    cdouble t = z + 7.5;
    return std::sqrt(2.0 * pi) * std::pow(t, z + 0.5) * std::exp(-t) * x;
}

cdouble recip_gamma(cdouble s) {
    cdouble r = 1.0;
    while (s.real() < 1.5) {
        r *= s;
        s += 1.0;
    }
    return r / gamma_complex(s);
}

HeatExpansion heat_expansion_from_theta(const ThetaFunction& th, int n, int extra_depth) {
    HeatExpansion E;
    E.lambda0 = th.lambda0;
    E.b = th.b;
    E.n = n;
    const int N = (n + 1) / 2 + 1 + std::max(0, extra_depth);
    E.c_tilde.assign(N + 1, 0.0);
    switch (th.backing) {
        case ThetaFunction::Backing::Atoms: {
            if (n != 0)
                throw std::invalid_argument("atom backings expand on the integer grid (n = 0)");
            for (std::size_t a = 0; a < th.atom_lambda.size(); ++a) {
                const double mu = th.atom_lambda[a] - th.lambda0;
                double coef = th.atom_weight[a];
                for (int k = 0; k <= N; ++k) {
                    E.c_tilde[k] += coef;
                    coef *= -mu / (k + 1);
                }
            }
            return E;
        }
        case ThetaFunction::Backing::ClosedForm: {
            for (const auto& term : th.closed_form.terms) {
                if ((n - term.twice_power) % 2 != 0)
                    throw std::invalid_argument(
                        "theta power grid does not align with the expansion dimension");
                const int base = (n - term.twice_power) / 2;
                if (base < 0)
                    throw std::invalid_argument("theta term falls below the t^{-n/2} leading power");
                const double mu = term.rate - th.lambda0;
                double coef = term.coefficient;
                for (int k = 0; base + k <= N; ++k) {
                    E.c_tilde[base + k] += coef;
                    coef *= -mu / (k + 1);
                }
            }
            return E;
        }
        case ThetaFunction::Backing::Formula:
            throw std::invalid_argument("formula backings need an analytically supplied expansion");
    }
    return E;
}

HeatExpansion heat_expansion_from_closed_form(const ClosedFormTheta& cf, double lambda0, int n,
                                              int extra_depth) {
    ThetaFunction th = make_theta(cf);
    th.lambda0 = lambda0;
    return heat_expansion_from_theta(th, n, extra_depth);
}

cdouble zeta_small(const ThetaFunction& th, const HeatExpansion& expansion, cdouble s) {
    check_expansion(th, expansion);
    if (std::abs(s) < 1e-12) return mellin_small_laurent(th, expansion).pole;
    return recip_gamma(s) * mellin_small(th, expansion, s);
}

cdouble zeta_large(const ThetaFunction& th, cdouble s, double beta) {
    if (s.real() >= beta - 1e-12)
        throw std::invalid_argument("zeta_large requires Re(s) < beta");
    double pole = 0;
    cdouble M = mellin_large(th, s, beta, false, &pole);
    if (pole != 0 && std::abs(s) < 1e-12)
        return pole;  // limit of recip_gamma(s) * pole/s
    if (pole != 0) M += pole / s;
    return recip_gamma(s) * M;
}

ZetaReport determinant(const ThetaFunction& th, const HeatExpansion& expansion, double beta) {
    if (!(beta > 0)) throw std::invalid_argument("determinant requires a positive decay exponent");
    check_expansion(th, expansion);

    Laurent small = mellin_small_laurent(th, expansion);
    double large_pole = 0;
    const double large_finite = mellin_large(th, cdouble(0.0), beta, true, &large_pole).real();

    ZetaReport R;
    R.beta_used = beta;
    R.zeta1_at_0 = small.pole;
    R.zeta_inf_at_0 = large_pole;
    R.zeta_at_0 = small.pole + large_pole;
    R.zeta_prime_at_0 = small.finite + large_finite + kEulerGamma * R.zeta_at_0;
    R.log_determinant = -R.zeta_prime_at_0;
    R.domain_notes = "zeta_inf valid on Re(s) < " + std::to_string(beta);

    // cross-check zeta(0) against the closed heat-coefficient formula on its
    // consistent domain
    if (th.b == 0.0 || th.lambda0 == 0.0) {
        const double B = th.lambda0 == 0.0 ? 1.0 : std::expm1(th.lambda0) / th.lambda0;
        double closed = -th.b * B;
        if (expansion.n % 2 == 0 && expansion.n / 2 <= expansion.depth())
            closed += expansion.c_tilde[expansion.n / 2] + th.b;
        closed += large_pole;  // bottom-atom contribution, outside Theorem 6.7's hypotheses
        if (std::abs(R.zeta_at_0 - closed) > 1e-6 * std::max(1.0, std::abs(closed)))
            throw std::runtime_error("zeta(0) disagrees with the closed heat-coefficient formula");
    } else {
        R.domain_notes += "; closed zeta(0) formula skipped (b>0 and lambda0>0)";
    }

    // numerical s-differencing cross-check of zeta'(0)
    {
        auto zeta_at = [&](double s) {
            return (zeta_small(th, expansion, cdouble(s)) + zeta_large(th, cdouble(s), beta)).real();
        };
        const double h = std::min(4e-3, 0.25 * beta);
        const double d1 = (zeta_at(h) - zeta_at(-h)) / (2 * h);
        const double d2 = (zeta_at(h / 2) - zeta_at(-h / 2)) / h;
        const double richardson = (4 * d2 - d1) / 3;
        if (std::abs(richardson - R.zeta_prime_at_0) > 1e-5 * std::max(1.0, std::abs(R.zeta_prime_at_0)))
            throw std::runtime_error("zeta'(0) pole-resolved value disagrees with s-differencing");
    }
    return R;
}

double beta_torsion_log(const std::vector<ZetaReport>& reports) {
    if (reports.empty()) throw std::invalid_argument("torsion needs reports for all degrees");
    std::vector<const ZetaReport*> by_degree(reports.size(), nullptr);
    for (const auto& r : reports) {
        if (r.degree < 0 || r.degree >= static_cast<int>(reports.size()))
            throw std::invalid_argument("torsion: non-contiguous degree list");
        by_degree[r.degree] = &r;
    }
    double acc = 0;
    for (std::size_t j = 0; j < by_degree.size(); ++j) {
        if (!by_degree[j]) throw std::invalid_argument("torsion: missing degree");
        if (!(by_degree[j]->beta_used > 0))
            throw std::invalid_argument("torsion requires positive beta-decay in every degree");
        const double sign = (j % 2 == 0) ? 1.0 : -1.0;
        acc += static_cast<double>(j) * sign * by_degree[j]->log_determinant;
    }
    return acc;
}

cdouble ns_zeta(const ThetaFunction& th, double alpha, cdouble s, ZetaPiece piece) {
    ThetaFunction flat = th;
    flat.lambda0 = 0.0;
    if (piece == ZetaPiece::Large) {
        if (s.real() >= alpha - 1e-12)
            throw std::invalid_argument("ns_zeta large piece requires Re(s) < alpha");
        return zeta_large(flat, s, alpha);
    }
    HeatExpansion E;
    if (flat.backing == ThetaFunction::Backing::Formula)
        throw std::invalid_argument("ns_zeta small piece needs a spectral backing");
    E = heat_expansion_from_theta(flat, 0, 3);
    return zeta_small(flat, E, s);
}

}  // namespace specgap
