#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <vector>

#include "mscs/kernels.hpp"

namespace k = mscs::kernels;

namespace {

std::vector<double> random_values(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> dist(0.0, 2.0);
  std::vector<double> v(n);
  for (auto& x : v) x = dist(rng);
  // Exact zeros and threshold ties exercise the sign handling.
  if (n > 3) {
    v[0] = 0.0;
    v[1] = -0.0;
    v[2] = 0.5;
    v[3] = -0.5;
  }
  return v;
}

std::vector<k::Backend> simd_backends() {
  std::vector<k::Backend> out;
  for (auto b : {k::Backend::Avx2, k::Backend::Neon}) {
    if (k::backend_supported(b)) out.push_back(b);
  }
  return out;
}

const std::size_t kLengths[] = {0, 1, 2, 3, 4, 5, 7, 8, 9, 15, 16, 17, 31, 64, 127, 1001};

}  // namespace

TEST(Kernels, ScalarSoftThresholdMatchesDefinition) {
  const std::vector<double> in = {3.0, -3.0, 0.5, -0.2, 0.0};
  std::vector<double> out(in.size());
  k::table(k::Backend::Scalar).soft_threshold(in.data(), 0.5, out.data(), in.size());
  EXPECT_EQ(out, (std::vector<double>{2.5, -2.5, 0.0, 0.0, 0.0}));
}

TEST(Kernels, ScalarModulusShrink) {
  const std::vector<double> re = {3.0, 0.0, 0.3};
  const std::vector<double> im = {4.0, 0.0, 0.4};
  std::vector<double> ro(3), io(3);
  k::table(k::Backend::Scalar).modulus_shrink(re.data(), im.data(), 1.0, ro.data(), io.data(), 3);
  EXPECT_DOUBLE_EQ(ro[0], 3.0 * 0.8);
  EXPECT_DOUBLE_EQ(io[0], 4.0 * 0.8);
  EXPECT_EQ(ro[1], 0.0);
  EXPECT_EQ(io[2], 0.0);
}

TEST(Kernels, ElementwiseVariantsAreBitIdentical) {
  const auto& ref = k::table(k::Backend::Scalar);
  for (auto backend : simd_backends()) {
    const auto& simd = k::table(backend);
    for (std::size_t n : kLengths) {
      const auto a = random_values(n, 11 + n);
      const auto b = random_values(n, 97 + n);
      std::vector<double> r1(n), r2(n), s1(n), s2(n);

      ref.soft_threshold(a.data(), 0.5, r1.data(), n);
      simd.soft_threshold(a.data(), 0.5, s1.data(), n);
      EXPECT_EQ(r1, s1) << k::backend_name(backend) << " soft_threshold n=" << n;
      for (std::size_t i = 0; i < n; ++i) EXPECT_EQ(std::signbit(r1[i]), std::signbit(s1[i]));

      ref.modulus_shrink(a.data(), b.data(), 0.7, r1.data(), r2.data(), n);
      simd.modulus_shrink(a.data(), b.data(), 0.7, s1.data(), s2.data(), n);
      EXPECT_EQ(r1, s1) << "modulus_shrink re n=" << n;
      EXPECT_EQ(r2, s2) << "modulus_shrink im n=" << n;

      ref.scale(a.data(), -1.25, r1.data(), n);
      simd.scale(a.data(), -1.25, s1.data(), n);
      EXPECT_EQ(r1, s1) << "scale n=" << n;

      ref.blend(a.data(), b.data(), 0.3, r1.data(), n);
      simd.blend(a.data(), b.data(), 0.3, s1.data(), n);
      EXPECT_EQ(r1, s1) << "blend n=" << n;
    }
  }
}

TEST(Kernels, ReductionVariantsAgreeToRoundoff) {
  const auto& ref = k::table(k::Backend::Scalar);
  for (auto backend : simd_backends()) {
    const auto& simd = k::table(backend);
    for (std::size_t n : kLengths) {
      const auto a = random_values(n, 5 + n);
      const auto b = random_values(n, 7 + n);
      const double tol = 1e-14 * (1.0 + static_cast<double>(n));
      const double ss = ref.sum_squares(a.data(), n);
      EXPECT_NEAR(ss, simd.sum_squares(a.data(), n), tol * (1.0 + ss));
      const double sa = ref.sum_abs(a.data(), n);
      EXPECT_NEAR(sa, simd.sum_abs(a.data(), n), tol * (1.0 + sa));
      const double sd = ref.squared_distance(a.data(), b.data(), n);
      EXPECT_NEAR(sd, simd.squared_distance(a.data(), b.data(), n), tol * (1.0 + sd));
    }
  }
}

TEST(Kernels, InPlaceSoftThreshold) {
  auto v = random_values(33, 3);
  std::vector<double> expected(v.size());
  k::table(k::Backend::Scalar).soft_threshold(v.data(), 0.4, expected.data(), v.size());
  k::soft_threshold(v, 0.4, v);
  EXPECT_EQ(v, expected);
}

TEST(Kernels, SizeMismatchThrows) {
  std::vector<double> a(4), b(3);
  EXPECT_THROW(k::soft_threshold(a, 0.1, b), std::invalid_argument);
  EXPECT_THROW(k::squared_distance(a, b), std::invalid_argument);
}

TEST(Kernels, ForceBackend) {
  const auto before = k::active_backend();
  k::force_backend(k::Backend::Scalar);
  EXPECT_EQ(k::active_backend(), k::Backend::Scalar);
  if (!k::backend_supported(k::Backend::Neon)) {
    EXPECT_THROW(k::force_backend(k::Backend::Neon), std::invalid_argument);
  }
  k::force_backend(before);
}
