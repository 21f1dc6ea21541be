#pragma once

#include <cstddef>
#include <span>
#include <string_view>

// Data-parallel inner loops shared by the proximal maps and the solver.
//
// Every kernel has a scalar reference implementation. SIMD variants (AVX2 on
// x86-64, NEON on aarch64) are selected once at runtime from CPU features.
// Elementwise kernels are bit-identical to the scalar reference; reductions
// differ only by summation order.
namespace mscs::kernels {

enum class Backend { Scalar, Avx2, Neon };

std::string_view backend_name(Backend backend);

// True when the variant was compiled in and the CPU can run it.
bool backend_supported(Backend backend);

// Backend used by the free functions below. Chosen on first use: the best
// supported backend, unless MSCS_KERNELS=scalar|avx2|neon says otherwise.
Backend active_backend();

// Throws std::invalid_argument if the backend is not supported.
void force_backend(Backend backend);

// out[i] = sign(in[i]) * max(|in[i]| - t, 0). in and out may alias.
void soft_threshold(std::span<const double> in, double t, std::span<double> out);

// Complex-modulus shrinkage over (re[i], im[i]) pairs:
// (re, im) *= max(1 - t / |(re, im)|, 0), with zero-modulus pairs mapped to 0.
void modulus_shrink(std::span<const double> re, std::span<const double> im, double t,
                    std::span<double> re_out, std::span<double> im_out);

// out[i] = s * in[i]. in and out may alias.
void scale(std::span<const double> in, double s, std::span<double> out);

// out[i] = center[i] + s * (v[i] - center[i]).
void blend(std::span<const double> center, std::span<const double> v, double s,
           std::span<double> out);

double sum_squares(std::span<const double> v);
double sum_abs(std::span<const double> v);
double squared_distance(std::span<const double> a, std::span<const double> b);

// Function table implemented by each backend translation unit.
struct KernelTable {
  void (*soft_threshold)(const double*, double, double*, std::size_t);
  void (*modulus_shrink)(const double*, const double*, double, double*, double*, std::size_t);
  void (*scale)(const double*, double, double*, std::size_t);
  void (*blend)(const double*, const double*, double, double*, std::size_t);
  double (*sum_squares)(const double*, std::size_t);
  double (*sum_abs)(const double*, std::size_t);
  double (*squared_distance)(const double*, const double*, std::size_t);
};

// Direct access to one backend's table, for equivalence testing.
const KernelTable& table(Backend backend);

}  // namespace mscs::kernels
