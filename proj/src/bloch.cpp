#include "specgap/bloch.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <thread>

#include "specgap/kernels.hpp"

namespace specgap {

std::pair<CMat, CMat> TwistedOperatorFamily::evaluate(const Vec& k) const {
    const int g = complex->rank;
    const int j = degree;
    CMat M = mass_here.evaluate(k);
    CMat A = CMat::Zero(M.rows(), M.cols());
    if (j < g) {
        CMat d = complex->coboundary_matrix(j, k);
        CMat Mup = mass_above->evaluate(k);
        A += d.adjoint() * Mup * d;
    }
    if (j > 0) {
        CMat dm = complex->coboundary_matrix(j - 1, k);
        CMat Mdown = mass_below->evaluate(k);
        // d_{j-1} M_{j-1}^{-1} d_{j-1}^* as a pencil stiffness:
        // M_j d_{j-1} M_{j-1}^{-1} d_{j-1}^* M_j
        CMat X = dm.adjoint().eval();
        CMat sol = Eigen::LLT<CMat>(Mdown).solve(X);
        A += M * dm * sol * M;
    }
    A = 0.5 * (A + A.adjoint()).eval();
    return {A, M};
}

CMat TwistedOperatorFamily::evaluate_up(const Vec& k) const {
    const int g = complex->rank;
    CMat M = mass_here.evaluate(k);
    CMat A = CMat::Zero(M.rows(), M.cols());
    if (degree < g) {
        CMat d = complex->coboundary_matrix(degree, k);
        CMat Mup = mass_above->evaluate(k);
        A = d.adjoint() * Mup * d;
    }
    return 0.5 * (A + A.adjoint()).eval();
}

TwistedOperatorFamily assemble_laplacian(const PeriodicComplex& complex,
                                         const std::vector<MassFamily>& masses, int degree) {
    const int g = complex.rank;
    if (degree < 0 || degree > g) throw std::invalid_argument("laplacian degree out of range");
    if (static_cast<int>(masses.size()) != g + 1)
        throw std::invalid_argument("need one mass family per degree 0..g");
    for (int j = 0; j <= g; ++j)
        if (masses[j].size != complex.cell_count(j) || masses[j].degree != j)
            throw std::invalid_argument("mass family dimensions do not match the complex");
    TwistedOperatorFamily fam;
    fam.degree = degree;
    fam.complex = &complex;
    fam.mass_here = masses[degree];
    if (degree > 0) fam.mass_below = masses[degree - 1];
    if (degree < g) fam.mass_above = masses[degree + 1];
    return fam;
}

double SpectralSample::node_weight() const {
    double w = 1.0;
    for (int a = 0; a < rank; ++a) w /= resolution;
    return w;
}

Vec SpectralSample::node_character(int node) const {
    Vec k = Vec::Zero(rank);
    int rem = node;
    for (int a = rank - 1; a >= 0; --a) {
        k[a] = 2.0 * std::numbers::pi * (rem % resolution) / resolution;
        rem /= resolution;
    }
    return k;
}

namespace {

// Hermitian-definite pencil (A, M) -> ascending real eigenvalues, via the
// Cholesky congruence M = L L^*.
std::vector<double> pencil_eigenvalues(const CMat& A, const CMat& M, const Vec& k) {
    Eigen::LLT<CMat> llt(M);
    if (llt.info() != Eigen::Success)
        throw std::runtime_error("mass matrix not positive definite at a character node");
    CMat L = llt.matrixL();
    CMat B = L.triangularView<Eigen::Lower>().solve(A);
    B = L.triangularView<Eigen::Lower>().solve(B.adjoint().eval());
    B = (0.5 * (B + B.adjoint())).eval();
    Eigen::SelfAdjointEigenSolver<CMat> es(B, Eigen::EigenvaluesOnly);
    if (es.info() != Eigen::Success) {
        std::string msg = "eigensolver failed to converge at character (";
        for (int a = 0; a < k.size(); ++a) msg += std::to_string(k[a]) + (a + 1 < k.size() ? "," : "");
        throw std::runtime_error(msg + ")");
    }
    std::vector<double> out(es.eigenvalues().data(), es.eigenvalues().data() + es.eigenvalues().size());
    return out;
}

}  // namespace

SpectralSample sample_spectrum(const PeriodicComplex& complex,
                               const std::vector<MassFamily>& masses, int grid_resolution,
                               int threads) {
    if (grid_resolution < 2) throw std::invalid_argument("grid_resolution must be >= 2");
    const int g = complex.rank;

    SpectralSample S;
    S.rank = g;
    S.resolution = grid_resolution;
    S.n_nodes = 1;
    for (int a = 0; a < g; ++a) S.n_nodes *= grid_resolution;
    S.complex_id = "torus-g" + std::to_string(g) + "-n" + std::to_string(complex.n_per_axis) +
                   "-r" + std::to_string(grid_resolution);
    S.degrees.resize(g + 1);

    std::vector<TwistedOperatorFamily> fams;
    for (int j = 0; j <= g; ++j) fams.push_back(assemble_laplacian(complex, masses, j));

    for (int j = 0; j <= g; ++j) {
        S.degrees[j].dim = complex.cell_count(j);
        S.degrees[j].full.assign(static_cast<std::size_t>(S.n_nodes) * S.degrees[j].dim, 0.0);
        S.degrees[j].up.assign(static_cast<std::size_t>(S.n_nodes) * S.degrees[j].dim, 0.0);
    }

    auto solve_node = [&](int node) {
        const Vec k = S.node_character(node);
        for (int j = 0; j <= g; ++j) {
            auto [A, M] = fams[j].evaluate(k);
            auto ev = pencil_eigenvalues(A, M, k);
            std::copy(ev.begin(), ev.end(),
                      S.degrees[j].full.begin() + static_cast<std::size_t>(node) * S.degrees[j].dim);
            CMat Aup = fams[j].evaluate_up(k);
            auto evu = pencil_eigenvalues(Aup, M, k);
            std::copy(evu.begin(), evu.end(),
                      S.degrees[j].up.begin() + static_cast<std::size_t>(node) * S.degrees[j].dim);
        }
    };

    threads = std::max(1, threads);
    if (threads == 1) {
        for (int node = 0; node < S.n_nodes; ++node) solve_node(node);
    } else {
        // static contiguous partition; every node writes its own slot, so the
        // result is independent of the thread count
        std::vector<std::thread> pool;
        std::exception_ptr error;
        std::mutex error_mutex;
        const int chunk = (S.n_nodes + threads - 1) / threads;
        for (int tt = 0; tt < threads; ++tt) {
            const int lo = tt * chunk, hi = std::min(S.n_nodes, (tt + 1) * chunk);
            if (lo >= hi) break;
            pool.emplace_back([&, lo, hi] {
                try {
                    for (int node = lo; node < hi; ++node) solve_node(node);
                } catch (...) {
                    std::lock_guard<std::mutex> lk(error_mutex);
                    if (!error) error = std::current_exception();
                }
            });
        }
        for (auto& th : pool) th.join();
        if (error) std::rethrow_exception(error);
    }

    for (int j = 0; j <= g; ++j)
        if (!S.degrees[j].full.empty())
            S.max_eigenvalue = std::max(
                S.max_eigenvalue, *std::max_element(S.degrees[j].full.begin(), S.degrees[j].full.end()));

    // continuity monitor: largest eigenvalue jump between nodes adjacent
    // along the last axis
    for (int j = 0; j <= g; ++j) {
        const auto& D = S.degrees[j];
        for (int node = 0; node + 1 < S.n_nodes; ++node) {
            if ((node + 1) % grid_resolution == 0) continue;
            for (int i = 0; i < D.dim; ++i)
                S.max_adjacent_gap =
                    std::max(S.max_adjacent_gap,
                             std::abs(D.full[static_cast<std::size_t>(node + 1) * D.dim + i] -
                                      D.full[static_cast<std::size_t>(node) * D.dim + i]));
        }
    }
    return S;
}

double vn_heat_trace(const SpectralSample& sample, int degree, double t) {
    if (t <= 0) throw std::invalid_argument("heat trace requires t > 0");
    const auto& D = sample.degrees.at(degree);
    return sample.node_weight() * kernels::sum_exp_neg(D.full.data(), D.full.size(), t);
}

double spectral_density_full(const SpectralSample& sample, int degree, double lambda) {
    const auto& D = sample.degrees.at(degree);
    return sample.node_weight() *
           static_cast<double>(kernels::count_le(D.full.data(), D.full.size(), lambda));
}

double spectral_density_f(const SpectralSample& sample, int degree, double lambda,
                          std::optional<double> kernel_tol) {
    if (degree < 0 || degree > sample.rank) return 0.0;
    const double tol = kernel_tol.value_or(sample.default_kernel_tol());
    const auto& D = sample.degrees.at(degree);
    const std::size_t le_lambda = kernels::count_le(D.up.data(), D.up.size(), lambda);
    const std::size_t le_tol = kernels::count_le(D.up.data(), D.up.size(), tol);
    return sample.node_weight() * static_cast<double>(le_lambda >= le_tol ? le_lambda - le_tol : 0);
}

double spectral_density_n(const SpectralSample& sample, int degree, double lambda,
                          std::optional<double> kernel_tol) {
    double acc = spectral_density_f(sample, degree, lambda, kernel_tol);
    if (degree > 0) acc += spectral_density_f(sample, degree - 1, lambda, kernel_tol);
    return acc;
}

SpectrumSummary spectrum_summary(const SpectralSample& sample, std::optional<double> kernel_tol) {
    const double tol = kernel_tol.value_or(sample.default_kernel_tol());
    if (tol <= 0) throw std::invalid_argument("kernel tolerance must be positive");
    SpectrumSummary out;
    for (int j = 0; j < static_cast<int>(sample.degrees.size()); ++j) {
        const auto& D = sample.degrees[j];
        DegreeSummary s;
        s.kernel_tol = tol;
        s.kernel_dim = sample.node_weight() *
                       static_cast<double>(kernels::count_le(D.full.data(), D.full.size(), tol));
        double lambda0 = std::numeric_limits<double>::infinity();
        for (double v : D.full)
            if (v > tol) lambda0 = std::min(lambda0, v);
        if (!std::isfinite(lambda0))
            throw std::runtime_error("degenerate operator: all eigenvalues below tolerance");
        s.lambda0 = lambda0;
        double kappa0 = std::numeric_limits<double>::infinity();
        for (double v : D.up)
            if (v > tol) kappa0 = std::min(kappa0, v);
        s.kappa0 = std::isfinite(kappa0) ? kappa0 : 0.0;
        out.per_degree.push_back(s);
    }
    return out;
}

SpectralSample shift_spectrum(const SpectralSample& sample, double mass_squared) {
    if (mass_squared < 0) throw std::invalid_argument("mass shift must be >= 0");
    SpectralSample S = sample;
    for (auto& D : S.degrees) {
        for (auto& v : D.full) v += mass_squared;
        // the up-part lists belong to delta d, which the deformation shifts too
        for (auto& v : D.up) v += mass_squared;
    }
    S.max_eigenvalue += mass_squared;
    S.complex_id += "+m2=" + std::to_string(mass_squared);
    return S;
}

}  // namespace specgap
