#pragma once

#include <cstddef>

// Arithmetic inner loops shared by the spectral pipeline. Each kernel has a
// scalar reference implementation and an AVX2 variant; the dispatched entry
// points pick the widest unit supported by the running CPU. The two paths are
// equivalence-tested against each other in tests/test_kernels.cpp.

namespace specgap::kernels {

// Sum of exp(-t * lam[i]) over i. Arguments with t*lam[i] beyond the double
// exponent range flush to zero, never to subnormal garbage.
double sum_exp_neg(const double* lam, std::size_t n, double t);

// Number of entries with lam[i] <= x (ties count, matching the closed-interval
// spectral counting convention used by the density functions).
std::size_t count_le(const double* lam, std::size_t n, double x);

// Scalar reference paths, exposed for equivalence tests.
double sum_exp_neg_scalar(const double* lam, std::size_t n, double t);
std::size_t count_le_scalar(const double* lam, std::size_t n, double x);

#if defined(__x86_64__) || defined(__i386__)
double sum_exp_neg_avx2(const double* lam, std::size_t n, double t);
std::size_t count_le_avx2(const double* lam, std::size_t n, double x);
#endif

// True when the dispatched entry points run the AVX2 variants.
bool simd_active();

}  // namespace specgap::kernels
