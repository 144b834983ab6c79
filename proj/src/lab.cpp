#include "specgap/lab.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "specgap/zeta.hpp"

namespace specgap {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

double binom(int n, int k) {
    double r = 1;
    for (int i = 0; i < k; ++i) r = r * (n - i) / (i + 1);
    return r;
}

// attach per-metric orders and the monotonicity flag
void finalize(ConvergenceReport& rep) {
    std::vector<std::string> metrics;
    for (const auto& r : rep.rows)
        if (std::find(metrics.begin(), metrics.end(), r.metric) == metrics.end())
            metrics.push_back(r.metric);
    for (const auto& m : metrics) {
        ConvergenceRow* prev = nullptr;
        for (auto& r : rep.rows) {
            if (r.metric != m) continue;
            if (prev && std::isfinite(r.error) && std::isfinite(prev->error)) {
                if (r.error > prev->error + 1e-12 * (1.0 + prev->error)) rep.monotone = false;
                r.order = (r.error > 0 && prev->error > 0) ? std::log2(prev->error / r.error) : kNaN;
            } else {
                r.order = kNaN;
            }
            prev = &r;
        }
    }
}

int level_resolution(const LabConfig& cfg, int level) {
    return cfg.double_resolution_per_level ? cfg.grid_resolution << level : cfg.grid_resolution;
}

SpectralSample sample_level(const PeriodicComplex& K, const LabConfig& cfg, int level) {
    std::vector<MassFamily> masses;
    for (int j = 0; j <= K.rank; ++j) masses.push_back(mass_family(K, j));
    return sample_spectrum(K, masses, level_resolution(cfg, level), cfg.threads);
}

}  // namespace

std::vector<const ConvergenceRow*> ConvergenceReport::metric_rows(const std::string& metric) const {
    std::vector<const ConvergenceRow*> out;
    for (const auto& r : rows)
        if (r.metric == metric) out.push_back(&r);
    return out;
}

double torus_theta_reference(const PeriodicComplex& base, int degree, double t) {
    const int g = base.rank;
    const double vol = std::abs(base.lattice_basis.determinant());
    return binom(g, degree) * vol * std::pow(4.0 * std::numbers::pi * t, -0.5 * g);
}

std::vector<PeriodicComplex> refinement_tower(const PeriodicComplex& base, int levels) {
    std::vector<PeriodicComplex> tower;
    tower.push_back(base);
    for (int l = 1; l < levels; ++l) tower.push_back(subdivide(tower.back()));
    return tower;
}

ConvergenceReport theta_convergence_on(const std::vector<PeriodicComplex>& tower,
                                       FitWindow t_window, int degree, const LabConfig& cfg) {
    if (tower.size() < 2) throw std::invalid_argument("need at least 2 levels");
    if (t_window.t_min <= 0 || t_window.t_max <= t_window.t_min)
        throw std::invalid_argument("bad t-window");
    ConvergenceReport rep;
    double prev_mesh = std::numeric_limits<double>::infinity();
    for (std::size_t l = 0; l < tower.size(); ++l) {
        const auto& K = tower[l];
        if (degree > K.rank) throw std::invalid_argument("degree exceeds rank");
        const double mesh = mesh_stats(K).mesh;
        if (mesh >= prev_mesh) rep.degenerate = true;
        prev_mesh = mesh;

        SpectralSample S = sample_level(K, cfg, static_cast<int>(l));
        ThetaFunction th = make_theta(S, degree);
        double sup = 0;
        const int pts = 50;
        for (int i = 0; i < pts; ++i) {
            const double t = t_window.t_min *
                             std::pow(t_window.t_max / t_window.t_min,
                                      static_cast<double>(i) / (pts - 1));
            const double ref = torus_theta_reference(K, degree, t);
            sup = std::max(sup, std::abs(th(t) - ref) / ref);
        }
        ConvergenceRow row;
        row.level = static_cast<int>(l);
        row.mesh = mesh;
        row.metric = "theta_sup_rel_error.deg" + std::to_string(degree);
        row.value = sup;
        row.error = sup;
        rep.rows.push_back(row);
    }
    finalize(rep);
    if (rep.degenerate) {
        rep.notes = "tower contains unrefined levels; orders undefined";
        for (auto& r : rep.rows) r.order = kNaN;
    }
    return rep;
}

ConvergenceReport theta_convergence(const PeriodicComplex& base, int levels, FitWindow t_window,
                                    int degree, const LabConfig& cfg) {
    if (levels < 3) throw std::invalid_argument("need at least 3 refinement levels");
    return theta_convergence_on(refinement_tower(base, levels), t_window, degree, cfg);
}

ConvergenceReport gap_convergence(const PeriodicComplex& base, int levels, double mass_shift,
                                  const LabConfig& cfg) {
    if (levels < 3) throw std::invalid_argument("need at least 3 refinement levels");
    if (mass_shift < 0) throw std::invalid_argument("mass shift must be >= 0");
    auto tower = refinement_tower(base, levels);
    ConvergenceReport rep;
    for (std::size_t l = 0; l < tower.size(); ++l) {
        const auto& K = tower[l];
        SpectralSample S = sample_level(K, cfg, static_cast<int>(l));
        const double mesh = mesh_stats(K).mesh;
        if (mass_shift > 0) {
            SpectralSample shifted = shift_spectrum(S, mass_shift);
            SpectrumSummary sum = spectrum_summary(shifted);
            for (int j = 0; j <= K.rank; ++j) {
                const auto& d = sum.per_degree[j];
                if (d.kernel_dim > 0.01)
                    throw std::runtime_error("kernel misdetection on the shifted operator");
                ConvergenceRow row{static_cast<int>(l), mesh,
                                   "lambda0.deg" + std::to_string(j), d.lambda0,
                                   std::abs(d.lambda0 / mass_shift - 1.0), kNaN};
                rep.rows.push_back(row);
                rep.rows.push_back({static_cast<int>(l), mesh,
                                    "lambda0_ratio.deg" + std::to_string(j),
                                    d.lambda0 / mass_shift, kNaN, kNaN});
            }
        } else {
            SpectrumSummary sum = spectrum_summary(S);
            for (int j = 0; j <= K.rank; ++j) {
                const auto& d = sum.per_degree[j];
                rep.rows.push_back({static_cast<int>(l), mesh, "lambda0.deg" + std::to_string(j),
                                    d.lambda0, d.lambda0, kNaN});
                rep.rows.push_back({static_cast<int>(l), mesh, "kappa0.deg" + std::to_string(j),
                                    d.kappa0, d.kappa0, kNaN});
            }
        }
    }
    finalize(rep);
    return rep;
}

ConvergenceReport density_sandwich(const PeriodicComplex& base, int levels,
                                   const std::vector<double>& lambda_grid, const LabConfig& cfg) {
    if (levels < 2) throw std::invalid_argument("need at least 2 levels");
    if (base.rank != 1)
        throw std::invalid_argument("density reference available for the circle only");
    if (lambda_grid.size() < 2) throw std::invalid_argument("need a lambda grid");
    for (std::size_t i = 1; i < lambda_grid.size(); ++i)
        if (lambda_grid[i] <= lambda_grid[i - 1])
            throw std::invalid_argument("non-monotone density grid rejected");

    // continuum F_0 of the line per unit length
    const double vol = std::abs(base.lattice_basis.determinant());
    auto ref = [&](double lam) { return lam <= 0 ? 0.0 : vol * std::sqrt(lam) / std::numbers::pi; };
    auto ref_inv = [&](double y) {
        const double r = y * std::numbers::pi / vol;
        return r * r;
    };

    auto tower = refinement_tower(base, levels);
    ConvergenceReport rep;
    for (std::size_t l = 0; l < tower.size(); ++l) {
        const auto& K = tower[l];
        SpectralSample S = sample_level(K, cfg, static_cast<int>(l));
        const double mesh = mesh_stats(K).mesh;

        auto comb = [&](double lam) { return spectral_density_f(S, 0, lam); };
        // smallest D >= 1 with comb(l) <= ref(D l)
        double D = 1.0;
        for (double lam : lambda_grid) D = std::max(D, ref_inv(comb(lam)) / lam);
        // smallest C >= 1 with ref(l) <= comb(C l): bisect the step function
        double C = 1.0;
        for (double lam : lambda_grid) {
            const double target = ref(lam);
            double lo = lam, hi = lam;
            while (comb(hi) < target && hi < 1e12 * lam) hi *= 2;
            if (comb(hi) < target) throw std::runtime_error("reference exceeds sampled density");
            for (int it = 0; it < 80; ++it) {
                const double mid = 0.5 * (lo + hi);
                (comb(mid) < target ? lo : hi) = mid;
            }
            C = std::max(C, hi / lam);
        }
        rep.rows.push_back({static_cast<int>(l), mesh, "dilation_D", D, D - 1.0, kNaN});
        rep.rows.push_back({static_cast<int>(l), mesh, "dilation_C", C, C - 1.0, kNaN});
    }
    finalize(rep);
    return rep;
}

ConvergenceReport zeta_convergence(const PeriodicComplex& base, int levels,
                                   const std::vector<cdouble>& s_probes, const LabConfig& cfg) {
    if (levels < 3) throw std::invalid_argument("need at least 3 levels");
    const int g = base.rank;
    const double vol = std::abs(base.lattice_basis.determinant());
    for (const auto& s : s_probes)
        if (s.real() <= 0.5 * g + 1e-9)
            throw std::invalid_argument("probe outside the Re(s) > g/2 strip");

    auto tower = refinement_tower(base, levels);
    ConvergenceReport rep;
    for (std::size_t l = 0; l < tower.size(); ++l) {
        const auto& K = tower[l];
        SpectralSample S = sample_level(K, cfg, static_cast<int>(l));
        const double mesh = mesh_stats(K).mesh;
        ThetaFunction th = make_theta(S, 0);

        // continuum reference: theta_ref = binom(g,0) vol (4 pi t)^{-g/2}
        const double c0 = vol * std::pow(4.0 * std::numbers::pi, -0.5 * g);
        for (std::size_t pi_ = 0; pi_ < s_probes.size(); ++pi_) {
            const cdouble s = s_probes[pi_];
            const cdouble comb = ns_zeta(th, 0.5 * g, s, ZetaPiece::Small);
            const cdouble refv = recip_gamma(s) * (c0 / (s - 0.5 * g));
            rep.rows.push_back({static_cast<int>(l), mesh,
                                "zeta1_probe" + std::to_string(pi_), comb.real(),
                                std::abs(comb - refv), kNaN});
        }
        // Novikov-Shubin exponent estimate gates the large piece
        BetaEstimate alpha = estimate_beta(th, 0.0, {1.0, 100.0}, 40);
        const cdouble zinf = ns_zeta(th, std::max(0.05, alpha.beta_ls), cdouble(0.0),
                                     ZetaPiece::Large);
        rep.rows.push_back({static_cast<int>(l), mesh, "zeta_inf_at_0", zinf.real(),
                            std::abs(zinf), kNaN});
    }
    finalize(rep);
    return rep;
}

}  // namespace specgap
