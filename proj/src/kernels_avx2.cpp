// AVX2 kernel variants. This translation unit is compiled with
// -mavx2 -mfma on x86-64 only; the dispatcher never routes here unless the
// CPU reports AVX2+FMA.

#if defined(__x86_64__) || defined(_M_X64)

#include <immintrin.h>

#include "bioprep/kernels.hpp"

namespace bioprep::kernels::detail {

namespace {

inline double hsum(__m256d v) {
    __m128d lo = _mm256_castpd256_pd128(v);
    __m128d hi = _mm256_extractf128_pd(v, 1);
    lo = _mm_add_pd(lo, hi);
    __m128d swapped = _mm_unpackhi_pd(lo, lo);
    return _mm_cvtsd_f64(_mm_add_sd(lo, swapped));
}

}  // namespace

void accumulate_avx2(std::span<double> acc, std::span<const float> v) {
    std::size_t i = 0;
    const std::size_t n = acc.size();
    for (; i + 4 <= n; i += 4) {
        __m256d a = _mm256_loadu_pd(acc.data() + i);
        __m256d x = _mm256_cvtps_pd(_mm_loadu_ps(v.data() + i));
        _mm256_storeu_pd(acc.data() + i, _mm256_add_pd(a, x));
    }
    for (; i < n; ++i) acc[i] += static_cast<double>(v[i]);
}

void add_avx2(std::span<const double> a, std::span<const double> b,
              std::span<double> out) {
    std::size_t i = 0;
    const std::size_t n = out.size();
    for (; i + 4 <= n; i += 4) {
        __m256d x = _mm256_loadu_pd(a.data() + i);
        __m256d y = _mm256_loadu_pd(b.data() + i);
        _mm256_storeu_pd(out.data() + i, _mm256_add_pd(x, y));
    }
    for (; i < n; ++i) out[i] = a[i] + b[i];
}

void scale_avx2(std::span<double> v, double s) {
    std::size_t i = 0;
    const std::size_t n = v.size();
    const __m256d sv = _mm256_set1_pd(s);
    for (; i + 4 <= n; i += 4) {
        __m256d x = _mm256_loadu_pd(v.data() + i);
        _mm256_storeu_pd(v.data() + i, _mm256_mul_pd(x, sv));
    }
    for (; i < n; ++i) v[i] *= s;
}

double dot_avx2(std::span<const float> a, std::span<const float> b) {
    std::size_t i = 0;
    const std::size_t n = a.size();
    __m256d acc0 = _mm256_setzero_pd();
    __m256d acc1 = _mm256_setzero_pd();
    for (; i + 8 <= n; i += 8) {
        __m256 xa = _mm256_loadu_ps(a.data() + i);
        __m256 xb = _mm256_loadu_ps(b.data() + i);
        __m256d lo = _mm256_mul_pd(_mm256_cvtps_pd(_mm256_castps256_ps128(xa)),
                                   _mm256_cvtps_pd(_mm256_castps256_ps128(xb)));
        __m256d hi = _mm256_mul_pd(_mm256_cvtps_pd(_mm256_extractf128_ps(xa, 1)),
                                   _mm256_cvtps_pd(_mm256_extractf128_ps(xb, 1)));
        acc0 = _mm256_add_pd(acc0, lo);
        acc1 = _mm256_add_pd(acc1, hi);
    }
    double s = hsum(_mm256_add_pd(acc0, acc1));
    for (; i < n; ++i)
        s += static_cast<double>(a[i]) * static_cast<double>(b[i]);
    return s;
}

double dot_d_avx2(std::span<const double> a, std::span<const double> b) {
    std::size_t i = 0;
    const std::size_t n = a.size();
    __m256d acc = _mm256_setzero_pd();
    for (; i + 4 <= n; i += 4) {
        __m256d xa = _mm256_loadu_pd(a.data() + i);
        __m256d xb = _mm256_loadu_pd(b.data() + i);
        acc = _mm256_fmadd_pd(xa, xb, acc);
    }
    double s = hsum(acc);
    for (; i < n; ++i) s += a[i] * b[i];
    return s;
}

}  // namespace bioprep::kernels::detail

#endif  // x86-64
