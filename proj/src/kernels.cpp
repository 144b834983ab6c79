#include "specgap/kernels.hpp"

#include <cmath>

namespace specgap::kernels {

double sum_exp_neg_scalar(const double* lam, std::size_t n, double t) {
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) acc += std::exp(-t * lam[i]);
    return acc;
}

std::size_t count_le_scalar(const double* lam, std::size_t n, double x) {
    std::size_t c = 0;
    for (std::size_t i = 0; i < n; ++i) c += (lam[i] <= x) ? 1u : 0u;
    return c;
}

#if defined(__x86_64__) || defined(__i386__)
static bool detect_avx2() {
    return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
}
#else
static bool detect_avx2() { return false; }
#endif

static const bool g_avx2 = detect_avx2();

bool simd_active() { return g_avx2; }

double sum_exp_neg(const double* lam, std::size_t n, double t) {
#if defined(__x86_64__) || defined(__i386__)
    if (g_avx2) return sum_exp_neg_avx2(lam, n, t);
#endif
    return sum_exp_neg_scalar(lam, n, t);
}

std::size_t count_le(const double* lam, std::size_t n, double x) {
#if defined(__x86_64__) || defined(__i386__)
    if (g_avx2) return count_le_avx2(lam, n, x);
#endif
    return count_le_scalar(lam, n, x);
}

}  // namespace specgap::kernels
