#include <arm_neon.h>

#include <cmath>

#include "backends.hpp"

namespace mscs::kernels::detail {
namespace {

void soft_threshold_neon(const double* in, double t, double* out, std::size_t n) {
  const float64x2_t thresh = vdupq_n_f64(t);
  const float64x2_t zero = vdupq_n_f64(0.0);
  const uint64x2_t sign_mask = vdupq_n_u64(0x8000000000000000ULL);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const float64x2_t v = vld1q_f64(in + i);
    const uint64x2_t sign = vandq_u64(vreinterpretq_u64_f64(v), sign_mask);
    const float64x2_t kept = vmaxq_f64(vsubq_f64(vabsq_f64(v), thresh), zero);
    vst1q_f64(out + i, vreinterpretq_f64_u64(vorrq_u64(vreinterpretq_u64_f64(kept), sign)));
  }
  for (; i < n; ++i) {
    const double mag = std::fabs(in[i]) - t;
    out[i] = std::copysign(mag > 0.0 ? mag : 0.0, in[i]);
  }
}

void modulus_shrink_neon(const double* re, const double* im, double t, double* re_out,
                         double* im_out, std::size_t n) {
  const float64x2_t thresh = vdupq_n_f64(t);
  const float64x2_t one = vdupq_n_f64(1.0);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const float64x2_t a = vld1q_f64(re + i);
    const float64x2_t b = vld1q_f64(im + i);
    const float64x2_t mod = vsqrtq_f64(vaddq_f64(vmulq_f64(a, a), vmulq_f64(b, b)));
    const uint64x2_t keep = vcgtq_f64(mod, thresh);
    const float64x2_t s = vreinterpretq_f64_u64(
        vandq_u64(keep, vreinterpretq_u64_f64(vsubq_f64(one, vdivq_f64(thresh, mod)))));
    vst1q_f64(re_out + i, vmulq_f64(a, s));
    vst1q_f64(im_out + i, vmulq_f64(b, s));
  }
  for (; i < n; ++i) {
    const double mod = std::sqrt(re[i] * re[i] + im[i] * im[i]);
    double s = 0.0;
    if (mod > t) s = 1.0 - t / mod;
    re_out[i] = re[i] * s;
    im_out[i] = im[i] * s;
  }
}

void scale_neon(const double* in, double s, double* out, std::size_t n) {
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) vst1q_f64(out + i, vmulq_n_f64(vld1q_f64(in + i), s));
  for (; i < n; ++i) out[i] = s * in[i];
}

void blend_neon(const double* center, const double* v, double s, double* out, std::size_t n) {
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const float64x2_t c = vld1q_f64(center + i);
    const float64x2_t d = vsubq_f64(vld1q_f64(v + i), c);
    vst1q_f64(out + i, vaddq_f64(c, vmulq_n_f64(d, s)));
  }
  for (; i < n; ++i) out[i] = center[i] + s * (v[i] - center[i]);
}

double sum_squares_neon(const double* v, std::size_t n) {
  float64x2_t acc = vdupq_n_f64(0.0);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const float64x2_t a = vld1q_f64(v + i);
    acc = vfmaq_f64(acc, a, a);
  }
  double total = vaddvq_f64(acc);
  for (; i < n; ++i) total += v[i] * v[i];
  return total;
}

double sum_abs_neon(const double* v, std::size_t n) {
  float64x2_t acc = vdupq_n_f64(0.0);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) acc = vaddq_f64(acc, vabsq_f64(vld1q_f64(v + i)));
  double total = vaddvq_f64(acc);
  for (; i < n; ++i) total += std::fabs(v[i]);
  return total;
}

double squared_distance_neon(const double* a, const double* b, std::size_t n) {
  float64x2_t acc = vdupq_n_f64(0.0);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const float64x2_t d = vsubq_f64(vld1q_f64(a + i), vld1q_f64(b + i));
    acc = vfmaq_f64(acc, d, d);
  }
  double total = vaddvq_f64(acc);
  for (; i < n; ++i) {
    const double d = a[i] - b[i];
    total += d * d;
  }
  return total;
}

}  // namespace

const KernelTable& neon_table() {
  static const KernelTable table{soft_threshold_neon, modulus_shrink_neon, scale_neon,
                                 blend_neon,          sum_squares_neon,    sum_abs_neon,
                                 squared_distance_neon};
  return table;
}

}  // namespace mscs::kernels::detail
