#include <cmath>

#include "backends.hpp"

namespace mscs::kernels::detail {
namespace {

void soft_threshold_scalar(const double* in, double t, double* out, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) {
    const double mag = std::fabs(in[i]) - t;
    out[i] = std::copysign(mag > 0.0 ? mag : 0.0, in[i]);
  }
}

void modulus_shrink_scalar(const double* re, const double* im, double t, double* re_out,
                           double* im_out, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) {
    const double mod = std::sqrt(re[i] * re[i] + im[i] * im[i]);
    double s = 0.0;
    if (mod > t) s = 1.0 - t / mod;
    re_out[i] = re[i] * s;
    im_out[i] = im[i] * s;
  }
}

void scale_scalar(const double* in, double s, double* out, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) out[i] = s * in[i];
}

void blend_scalar(const double* center, const double* v, double s, double* out, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) out[i] = center[i] + s * (v[i] - center[i]);
}

double sum_squares_scalar(const double* v, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) acc += v[i] * v[i];
  return acc;
}

double sum_abs_scalar(const double* v, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) acc += std::fabs(v[i]);
  return acc;
}

double squared_distance_scalar(const double* a, const double* b, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double d = a[i] - b[i];
    acc += d * d;
  }
  return acc;
}

}  // namespace

const KernelTable& scalar_table() {
  static const KernelTable table{soft_threshold_scalar, modulus_shrink_scalar, scale_scalar,
                                 blend_scalar,          sum_squares_scalar,    sum_abs_scalar,
                                 squared_distance_scalar};
  return table;
}

}  // namespace mscs::kernels::detail
