#include <algorithm>
#include <cctype>
#include <cmath>
#include <numbers>
#include <numeric>

#include "mscs/error.hpp"
#include "mscs/sensing.hpp"

namespace mscs {

std::string to_string(SensingKind kind) {
  switch (kind) {
    case SensingKind::Gaussian: return "gaussian";
    case SensingKind::Bernoulli: return "bernoulli";
    case SensingKind::PartialFourier: return "partial_fourier";
  }
  return "unknown";
}

SensingKind sensing_kind_from_string(const std::string& name) {
  if (name == "gaussian") return SensingKind::Gaussian;
  if (name == "bernoulli") return SensingKind::Bernoulli;
  if (name == "partial_fourier") return SensingKind::PartialFourier;
  throw ConfigError("unknown sensing kind: " + name);
}

std::string to_string(BlockKind kind) {
  switch (kind) {
    case BlockKind::Rectangle: return "rectangle";
    case BlockKind::Triangle: return "triangle";
    case BlockKind::Sine: return "sine";
  }
  return "unknown";
}

BlockKind block_kind_from_string(const std::string& name) {
  if (name == "rectangle" || name == "constant") return BlockKind::Rectangle;
  if (name == "triangle") return BlockKind::Triangle;
  if (name == "sine") return BlockKind::Sine;
  throw ConfigError("unknown block kind: " + name);
}

std::uint64_t mix_seed(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

std::uint64_t derive_seed(std::uint64_t base, std::initializer_list<std::uint64_t> tags) {
  std::uint64_t state = mix_seed(base);
  for (std::uint64_t tag : tags) state = mix_seed(state ^ mix_seed(tag + 0x632be59bd9b4e019ULL));
  return state;
}

Eigen::MatrixXd generate_matrix(const SensingSpec& spec) {
  if (spec.m < 1 || spec.n < 1) throw DimensionError("sensing matrix needs m, n >= 1");
  if (spec.m > spec.n) throw DimensionError("sensing matrix needs m <= n");
  Rng rng(spec.seed);
  Eigen::MatrixXd phi(spec.m, spec.n);
  switch (spec.kind) {
    case SensingKind::Gaussian: {
      std::normal_distribution<double> normal(0.0, 1.0);
      // Row-major fill so a prefix of rows does not depend on n's layout.
      for (Index i = 0; i < spec.m; ++i) {
        for (Index j = 0; j < spec.n; ++j) phi(i, j) = normal(rng);
      }
      break;
    }
    case SensingKind::Bernoulli: {
      for (Index i = 0; i < spec.m; ++i) {
        for (Index j = 0; j < spec.n; ++j) phi(i, j) = (rng() >> 63) ? 1.0 : -1.0;
      }
      break;
    }
    case SensingKind::PartialFourier: {
      const Index n = spec.n;
      std::vector<Index> rows(static_cast<std::size_t>(n));
      std::iota(rows.begin(), rows.end(), Index{0});
      // Fisher-Yates with explicit draws; std::shuffle's sequence is implementation-defined.
      for (Index i = n - 1; i > 0; --i) {
        const Index j = static_cast<Index>(rng() % static_cast<std::uint64_t>(i + 1));
        std::swap(rows[static_cast<std::size_t>(i)], rows[static_cast<std::size_t>(j)]);
      }
      const double base = 1.0 / std::sqrt(static_cast<double>(n));
      for (Index i = 0; i < spec.m; ++i) {
        // Basis index b: 0 is DC, 1..n-1 alternate cos/sin of frequency
        // (b+1)/2, and b = n-1 is the Nyquist cosine when n is even.
        const Index b = rows[static_cast<std::size_t>(i)];
        const Index freq = (b + 1) / 2;
        const bool nyquist = (n % 2 == 0) && b == n - 1;
        for (Index j = 0; j < n; ++j) {
          const double angle = 2.0 * std::numbers::pi * static_cast<double>((freq * j) % n) /
                               static_cast<double>(n);
          double value;
          if (b == 0) {
            value = base;
          } else if (nyquist) {
            value = base * ((j % 2 == 0) ? 1.0 : -1.0);
          } else if (b % 2 == 1) {
            value = std::numbers::sqrt2 * base * std::cos(angle);
          } else {
            value = std::numbers::sqrt2 * base * std::sin(angle);
          }
          phi(i, j) = value;
        }
      }
      break;
    }
  }
  return phi;
}

Eigen::VectorXd add_noise(const Eigen::VectorXd& x, double snr, std::uint64_t seed) {
  if (std::isnan(snr) || snr <= 0.0) throw ParameterError("snr must be positive");
  if (std::isinf(snr)) return x;
  const double n = static_cast<double>(x.size());
  if (n == 0) return x;
  const double sigma = std::sqrt(x.squaredNorm() / (snr * n));
  Rng rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  Eigen::VectorXd out = x;
  for (Index i = 0; i < out.size(); ++i) out(i) += sigma * normal(rng);
  return out;
}

SimulatedSignal simulate_signal(const SimulatedSignalSpec& spec) {
  if (spec.n < 1) throw DimensionError("signal length must be positive");
  if (spec.block_width < 1 || spec.block_width > spec.n) {
    throw DimensionError("block width must lie in 1..n");
  }
  if (std::isnan(spec.snr) || spec.snr <= 0.0) throw ParameterError("snr must be positive");

  Rng rng(derive_seed(spec.seed, {1}));
  const Index offsets = spec.n - spec.block_width + 1;
  const Index start = static_cast<Index>(rng() % static_cast<std::uint64_t>(offsets));

  SimulatedSignal out;
  out.block_start = start;
  out.clean = Eigen::VectorXd::Zero(spec.n);
  const double width = static_cast<double>(spec.block_width);
  for (Index j = 0; j < spec.block_width; ++j) {
    const double t = static_cast<double>(j);
    double value = 1.0;
    switch (spec.block_kind) {
      case BlockKind::Rectangle: value = 1.0; break;
      case BlockKind::Triangle: value = (t + 1.0) / width; break;
      case BlockKind::Sine: value = std::sin(2.0 * std::numbers::pi * t / width); break;
    }
    out.clean(start + j) = value;
  }
  const double norm = out.clean.norm();
  if (norm > 0.0) out.clean /= norm;
  out.noisy = add_noise(out.clean, spec.snr, derive_seed(spec.seed, {2}));
  return out;
}

Eigen::MatrixXd sense(const Eigen::MatrixXd& phi, const Eigen::MatrixXd& x) {
  if (phi.cols() != x.rows()) {
    throw DimensionError("sense: Phi has " + std::to_string(phi.cols()) + " columns, signal has " +
                         std::to_string(x.rows()) + " rows");
  }
  return phi * x;
}

double parse_snr(const std::string& text) {
  std::string s;
  for (char c : text) {
    if (!std::isspace(static_cast<unsigned char>(c))) s.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
  }
  if (s == "inf" || s == "infinity" || s == "none") return std::numeric_limits<double>::infinity();
  bool decibels = false;
  if (s.size() > 2 && s.substr(s.size() - 2) == "db") {
    decibels = true;
    s.resize(s.size() - 2);
  }
  double value = 0.0;
  try {
    std::size_t used = 0;
    value = std::stod(s, &used);
    if (used != s.size()) throw ConfigError("bad snr: " + text);
  } catch (const std::logic_error&) {
    throw ConfigError("bad snr: " + text);
  }
  if (decibels) value = std::pow(10.0, value / 10.0);
  if (!(value > 0.0)) throw ConfigError("snr must be positive: " + text);
  return value;
}

}  // namespace mscs
