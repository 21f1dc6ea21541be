// Compiled with -mavx2 -mfma; only reached after a runtime CPU check.
#include <immintrin.h>

#include <cmath>

#include "backends.hpp"

namespace mscs::kernels::detail {
namespace {

inline double horizontal_sum(__m256d v) {
  const __m128d lo = _mm256_castpd256_pd128(v);
  const __m128d hi = _mm256_extractf128_pd(v, 1);
  const __m128d pair = _mm_add_pd(lo, hi);
  const __m128d swapped = _mm_unpackhi_pd(pair, pair);
  return _mm_cvtsd_f64(_mm_add_sd(pair, swapped));
}

void soft_threshold_avx2(const double* in, double t, double* out, std::size_t n) {
  const __m256d sign_mask = _mm256_set1_pd(-0.0);
  const __m256d thresh = _mm256_set1_pd(t);
  const __m256d zero = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d v = _mm256_loadu_pd(in + i);
    const __m256d sign = _mm256_and_pd(v, sign_mask);
    const __m256d mag = _mm256_sub_pd(_mm256_andnot_pd(sign_mask, v), thresh);
    // max(mag, 0) returns +0 for mag <= 0, matching the scalar ternary.
    const __m256d kept = _mm256_max_pd(mag, zero);
    _mm256_storeu_pd(out + i, _mm256_or_pd(kept, sign));
  }
  for (; i < n; ++i) {
    const double mag = std::fabs(in[i]) - t;
    out[i] = std::copysign(mag > 0.0 ? mag : 0.0, in[i]);
  }
}

void modulus_shrink_avx2(const double* re, const double* im, double t, double* re_out,
                         double* im_out, std::size_t n) {
  const __m256d thresh = _mm256_set1_pd(t);
  const __m256d one = _mm256_set1_pd(1.0);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d a = _mm256_loadu_pd(re + i);
    const __m256d b = _mm256_loadu_pd(im + i);
    const __m256d mod = _mm256_sqrt_pd(_mm256_add_pd(_mm256_mul_pd(a, a), _mm256_mul_pd(b, b)));
    const __m256d keep = _mm256_cmp_pd(mod, thresh, _CMP_GT_OQ);
    const __m256d s = _mm256_and_pd(keep, _mm256_sub_pd(one, _mm256_div_pd(thresh, mod)));
    _mm256_storeu_pd(re_out + i, _mm256_mul_pd(a, s));
    _mm256_storeu_pd(im_out + i, _mm256_mul_pd(b, s));
  }
  for (; i < n; ++i) {
    const double mod = std::sqrt(re[i] * re[i] + im[i] * im[i]);
    double s = 0.0;
    if (mod > t) s = 1.0 - t / mod;
    re_out[i] = re[i] * s;
    im_out[i] = im[i] * s;
  }
}

void scale_avx2(const double* in, double s, double* out, std::size_t n) {
  const __m256d factor = _mm256_set1_pd(s);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    _mm256_storeu_pd(out + i, _mm256_mul_pd(factor, _mm256_loadu_pd(in + i)));
  }
  for (; i < n; ++i) out[i] = s * in[i];
}

void blend_avx2(const double* center, const double* v, double s, double* out, std::size_t n) {
  const __m256d factor = _mm256_set1_pd(s);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d c = _mm256_loadu_pd(center + i);
    const __m256d d = _mm256_sub_pd(_mm256_loadu_pd(v + i), c);
    _mm256_storeu_pd(out + i, _mm256_add_pd(c, _mm256_mul_pd(factor, d)));
  }
  for (; i < n; ++i) out[i] = center[i] + s * (v[i] - center[i]);
}

double sum_squares_avx2(const double* v, std::size_t n) {
  __m256d acc0 = _mm256_setzero_pd();
  __m256d acc1 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    const __m256d a = _mm256_loadu_pd(v + i);
    const __m256d b = _mm256_loadu_pd(v + i + 4);
    acc0 = _mm256_fmadd_pd(a, a, acc0);
    acc1 = _mm256_fmadd_pd(b, b, acc1);
  }
  for (; i + 4 <= n; i += 4) {
    const __m256d a = _mm256_loadu_pd(v + i);
    acc0 = _mm256_fmadd_pd(a, a, acc0);
  }
  double acc = horizontal_sum(_mm256_add_pd(acc0, acc1));
  for (; i < n; ++i) acc += v[i] * v[i];
  return acc;
}

double sum_abs_avx2(const double* v, std::size_t n) {
  const __m256d sign_mask = _mm256_set1_pd(-0.0);
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    acc = _mm256_add_pd(acc, _mm256_andnot_pd(sign_mask, _mm256_loadu_pd(v + i)));
  }
  double total = horizontal_sum(acc);
  for (; i < n; ++i) total += std::fabs(v[i]);
  return total;
}

double squared_distance_avx2(const double* a, const double* b, std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d d = _mm256_sub_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i));
    acc = _mm256_fmadd_pd(d, d, acc);
  }
  double total = horizontal_sum(acc);
  for (; i < n; ++i) {
    const double d = a[i] - b[i];
    total += d * d;
  }
  return total;
}

}  // namespace

const KernelTable& avx2_table() {
  static const KernelTable table{soft_threshold_avx2, modulus_shrink_avx2, scale_avx2,
                                 blend_avx2,          sum_squares_avx2,    sum_abs_avx2,
                                 squared_distance_avx2};
  return table;
}

}  // namespace mscs::kernels::detail
