// AVX2 variants. This translation unit is compiled with -mavx2 -mfma and must
// only be entered after the runtime CPU check in kernels.cpp.

#if defined(__x86_64__) || defined(__i386__)

#include <immintrin.h>

#include <cmath>
#include <cstdint>

#include "specgap/kernels.hpp"

namespace specgap::kernels {

namespace {

// exp() on four lanes, Cody-Waite reduction plus the cephes rational kernel.
// Inputs below -708 flush to zero (the scalar path would return a subnormal
// there; the spectral sums never resolve that regime).
inline __m256d exp_pd(__m256d x) {
    const __m256d log2e = _mm256_set1_pd(1.4426950408889634073599);
    const __m256d c1 = _mm256_set1_pd(6.93145751953125e-1);
    const __m256d c2 = _mm256_set1_pd(1.42860682030941723212e-6);

    const __m256d p0 = _mm256_set1_pd(1.26177193074810590878e-4);
    const __m256d p1 = _mm256_set1_pd(3.02994407707441961300e-2);
    const __m256d p2 = _mm256_set1_pd(9.99999999999999999910e-1);
    const __m256d q0 = _mm256_set1_pd(3.00198505138664455042e-6);
    const __m256d q1 = _mm256_set1_pd(2.52448340349684104192e-3);
    const __m256d q2 = _mm256_set1_pd(2.27265548208155028766e-1);
    const __m256d q3 = _mm256_set1_pd(2.00000000000000000005e0);

    const __m256d lo = _mm256_set1_pd(-708.0);
    const __m256d hi = _mm256_set1_pd(709.0);

    __m256d zero_mask = _mm256_cmp_pd(x, lo, _CMP_LT_OQ);
    x = _mm256_min_pd(x, hi);
    x = _mm256_max_pd(x, lo);

    __m256d n = _mm256_round_pd(_mm256_mul_pd(x, log2e),
                                _MM_FROUND_TO_NEAREST_INT | _MM_FROUND_NO_EXC);
    __m256d r = _mm256_fnmadd_pd(n, c1, x);
    r = _mm256_fnmadd_pd(n, c2, r);

    __m256d r2 = _mm256_mul_pd(r, r);
    __m256d px = _mm256_fmadd_pd(p0, r2, p1);
    px = _mm256_fmadd_pd(px, r2, p2);
    px = _mm256_mul_pd(px, r);
    __m256d qx = _mm256_fmadd_pd(q0, r2, q1);
    qx = _mm256_fmadd_pd(qx, r2, q2);
    qx = _mm256_fmadd_pd(qx, r2, q3);

    __m256d e = _mm256_div_pd(px, _mm256_sub_pd(qx, px));
    e = _mm256_fmadd_pd(_mm256_set1_pd(2.0), e, _mm256_set1_pd(1.0));

    // 2^n via the exponent bits.
    __m128i ni = _mm256_cvtpd_epi32(n);
    __m256i nl = _mm256_cvtepi32_epi64(ni);
    nl = _mm256_add_epi64(nl, _mm256_set1_epi64x(1023));
    nl = _mm256_slli_epi64(nl, 52);
    __m256d pow2n = _mm256_castsi256_pd(nl);

    e = _mm256_mul_pd(e, pow2n);
    return _mm256_andnot_pd(zero_mask, e);
}

}  // namespace

double sum_exp_neg_avx2(const double* lam, std::size_t n, double t) {
    const __m256d neg_t = _mm256_set1_pd(-t);
    __m256d acc = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        __m256d v = _mm256_loadu_pd(lam + i);
        acc = _mm256_add_pd(acc, exp_pd(_mm256_mul_pd(neg_t, v)));
    }
    alignas(32) double buf[4];
    _mm256_store_pd(buf, acc);
    double sum = (buf[0] + buf[1]) + (buf[2] + buf[3]);
    for (; i < n; ++i) {
        double x = -t * lam[i];
        sum += (x < -708.0) ? 0.0 : std::exp(x);
    }
    return sum;
}

std::size_t count_le_avx2(const double* lam, std::size_t n, double x) {
    const __m256d xv = _mm256_set1_pd(x);
    std::size_t c = 0;
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        __m256d v = _mm256_loadu_pd(lam + i);
        __m256d m = _mm256_cmp_pd(v, xv, _CMP_LE_OQ);
        c += static_cast<std::size_t>(__builtin_popcount(
            static_cast<unsigned>(_mm256_movemask_pd(m))));
    }
    for (; i < n; ++i) c += (lam[i] <= x) ? 1u : 0u;
    return c;
}

}  // namespace specgap::kernels

#endif  // x86
