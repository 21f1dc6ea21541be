#include <atomic>
#include <cstdlib>
#include <stdexcept>
#include <string>

#include "backends.hpp"

namespace mscs::kernels {
namespace {

bool cpu_has_avx2() {
#if defined(MSCS_HAVE_AVX2_TU) && (defined(__GNUC__) || defined(__clang__))
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

Backend best_backend() {
  if (const char* env = std::getenv("MSCS_KERNELS")) {
    const std::string requested(env);
    if (requested == "scalar") return Backend::Scalar;
    if (requested == "avx2" && backend_supported(Backend::Avx2)) return Backend::Avx2;
    if (requested == "neon" && backend_supported(Backend::Neon)) return Backend::Neon;
  }
  if (backend_supported(Backend::Avx2)) return Backend::Avx2;
  if (backend_supported(Backend::Neon)) return Backend::Neon;
  return Backend::Scalar;
}

std::atomic<const KernelTable*>& active_table() {
  static std::atomic<const KernelTable*> current{&table(best_backend())};
  return current;
}

std::atomic<Backend>& active_tag() {
  static std::atomic<Backend> tag{best_backend()};
  return tag;
}

inline const KernelTable& current() { return *active_table().load(std::memory_order_relaxed); }

void require_same_size(std::size_t a, std::size_t b) {
  if (a != b) throw std::invalid_argument("kernel operands differ in length");
}

}  // namespace

std::string_view backend_name(Backend backend) {
  switch (backend) {
    case Backend::Scalar: return "scalar";
    case Backend::Avx2: return "avx2";
    case Backend::Neon: return "neon";
  }
  return "unknown";
}

bool backend_supported(Backend backend) {
  switch (backend) {
    case Backend::Scalar: return true;
    case Backend::Avx2: return cpu_has_avx2();
    case Backend::Neon:
#if defined(MSCS_HAVE_NEON_TU)
      return true;
#else
      return false;
#endif
  }
  return false;
}

const KernelTable& table(Backend backend) {
  if (!backend_supported(backend)) {
    throw std::invalid_argument("kernel backend not supported: " + std::string(backend_name(backend)));
  }
  switch (backend) {
#if defined(MSCS_HAVE_AVX2_TU)
    case Backend::Avx2: return detail::avx2_table();
#endif
#if defined(MSCS_HAVE_NEON_TU)
    case Backend::Neon: return detail::neon_table();
#endif
    default: return detail::scalar_table();
  }
}

Backend active_backend() { return active_tag().load(std::memory_order_relaxed); }

void force_backend(Backend backend) {
  const KernelTable& t = table(backend);
  active_table().store(&t, std::memory_order_relaxed);
  active_tag().store(backend, std::memory_order_relaxed);
}

void soft_threshold(std::span<const double> in, double t, std::span<double> out) {
  require_same_size(in.size(), out.size());
  current().soft_threshold(in.data(), t, out.data(), in.size());
}

void modulus_shrink(std::span<const double> re, std::span<const double> im, double t,
                    std::span<double> re_out, std::span<double> im_out) {
  require_same_size(re.size(), im.size());
  require_same_size(re.size(), re_out.size());
  require_same_size(re.size(), im_out.size());
  current().modulus_shrink(re.data(), im.data(), t, re_out.data(), im_out.data(), re.size());
}

void scale(std::span<const double> in, double s, std::span<double> out) {
  require_same_size(in.size(), out.size());
  current().scale(in.data(), s, out.data(), in.size());
}

void blend(std::span<const double> center, std::span<const double> v, double s,
           std::span<double> out) {
  require_same_size(center.size(), v.size());
  require_same_size(center.size(), out.size());
  current().blend(center.data(), v.data(), s, out.data(), v.size());
}

double sum_squares(std::span<const double> v) { return current().sum_squares(v.data(), v.size()); }

double sum_abs(std::span<const double> v) { return current().sum_abs(v.data(), v.size()); }

double squared_distance(std::span<const double> a, std::span<const double> b) {
  require_same_size(a.size(), b.size());
  return current().squared_distance(a.data(), b.data(), a.size());
}

}  // namespace mscs::kernels
