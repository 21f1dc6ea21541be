#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <initializer_list>
#include <limits>
#include <random>
#include <string>

#include "mscs/ops.hpp"

namespace mscs {

enum class SensingKind { Gaussian, Bernoulli, PartialFourier };

std::string to_string(SensingKind kind);
SensingKind sensing_kind_from_string(const std::string& name);

struct SensingSpec {
  SensingKind kind = SensingKind::Gaussian;
  Index m = 1;
  Index n = 1;
  std::uint64_t seed = 0;
};

enum class BlockKind { Rectangle, Triangle, Sine };

std::string to_string(BlockKind kind);
BlockKind block_kind_from_string(const std::string& name);

struct SimulatedSignalSpec {
  Index n = 500;
  Index block_width = 50;
  BlockKind block_kind = BlockKind::Rectangle;
  // Linear power ratio ||x||^2 / E||noise||^2; infinity means noiseless.
  double snr = std::numeric_limits<double>::infinity();
  std::uint64_t seed = 0;
};

struct SimulatedSignal {
  Eigen::VectorXd noisy;
  Eigen::VectorXd clean;  // unit L2 norm
  Index block_start = 0;
};

// Stateless seed mixing (SplitMix64 finalizer) used to derive independent,
// order-free streams for matrices, signals and noise.
std::uint64_t mix_seed(std::uint64_t seed);
std::uint64_t derive_seed(std::uint64_t base, std::initializer_list<std::uint64_t> tags);

using Rng = std::mt19937_64;

// Gaussian entries are N(0, 1); Bernoulli entries are +-1 with equal
// probability; partial Fourier picks m distinct rows of the real orthonormal
// Fourier basis (cosine/sine pairs), so Phi Phi^T = I.
Eigen::MatrixXd generate_matrix(const SensingSpec& spec);

SimulatedSignal simulate_signal(const SimulatedSignalSpec& spec);

// x + noise with ||x||^2 / E||noise||^2 = snr. snr = infinity returns x.
Eigen::VectorXd add_noise(const Eigen::VectorXd& x, double snr, std::uint64_t seed);

// Phi x, column-wise for matrices.
Eigen::MatrixXd sense(const Eigen::MatrixXd& phi, const Eigen::MatrixXd& x);

// Parses "5" (linear) or "7dB" / "7 db" (decibels) into a linear ratio; "inf" is noiseless.
double parse_snr(const std::string& text);

}  // namespace mscs
