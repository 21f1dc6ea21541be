#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "mscs/presets.hpp"
#include "mscs/sensing.hpp"
#include "mscs/solver.hpp"

namespace mscs {

// ---- error metrics ----------------------------------------------------------

enum class ErrorNorm { L1 = 1, L2 = 2 };

// ||vec(original - estimate)||_b
double trial_error(const Eigen::MatrixXd& original, const Eigen::MatrixXd& estimate, ErrorNorm b);

// (1/C) sum_c ||vec(X_c - Xhat_c)||_b
double mean_error(const std::vector<Eigen::MatrixXd>& originals,
                  const std::vector<Eigen::MatrixXd>& estimates, ErrorNorm b);

// Sample standard deviation (divisor C - 1) of the per-trial errors. Needs C >= 2.
double std_error(const std::vector<Eigen::MatrixXd>& originals,
                 const std::vector<Eigen::MatrixXd>& estimates, ErrorNorm b);

double sample_mean(const std::vector<double>& values);
double sample_std(const std::vector<double>& values);

// ---- exhaustive L0 search ---------------------------------------------------

struct L0Result {
  bool found = false;
  Eigen::VectorXd estimate;
  std::vector<Index> support;
};

// Sparsest exact solution of y = Phi x with at most k_max nonzeros, by
// enumerating supports in order of size. Ties go to the smaller L2 norm.
// Limited to n <= 16 and k_max <= 3.
L0Result l0_oracle(const Eigen::VectorXd& y, const Eigen::MatrixXd& phi, int k_max);

// ---- Monte Carlo benchmark --------------------------------------------------

struct EpsilonRule {
  enum class Kind { Absolute, Relative };
  Kind kind = Kind::Absolute;
  double value = 0.0;

  // Relative rules scale the Frobenius norm of the measurements.
  double resolve(const Eigen::MatrixXd& measurements) const;
};

// One recovery method in a comparison. An empty preset is the minimum-norm
// least-squares baseline.
struct MethodSpec {
  std::string name;
  std::optional<Preset> preset;
  PresetParams params;
  EpsilonRule epsilon;
};

struct TrialSignal {
  Eigen::MatrixXd clean;     // ground truth for the error metrics
  Eigen::MatrixXd observed;  // what the sensing matrix is applied to
};

// Produces the signal for trial c from a seed. Must be deterministic.
struct SignalSource {
  std::string description;
  Index rows = 0;
  Index columns = 1;
  std::function<TrialSignal(Index trial, std::uint64_t seed)> draw;
};

SignalSource simulated_block_source(const SimulatedSignalSpec& spec);
// Trial c uses sections[c mod count]; noise at `snr` is added per trial.
SignalSource section_source(std::vector<Eigen::VectorXd> sections, double snr);
// Trial c uses images[c mod count].
SignalSource image_source(std::vector<Eigen::MatrixXd> images);
// Random piecewise-constant image of the given rank: a sum of `rank`
// axis-aligned rectangle indicators, normalized by its maximum element.
Eigen::MatrixXd synthetic_low_rank_image(Index size, int rank, std::uint64_t seed);
SignalSource synthetic_image_source(Index size, int rank);

struct BenchmarkSpec {
  std::vector<MethodSpec> methods;
  std::vector<Index> m_values;
  SignalSource source;
  SensingKind sensing = SensingKind::Gaussian;
  int trials = 1;
  std::uint64_t seed = 0;
  SolverConfig solver;
  int threads = 1;
};

struct TrialReport {
  std::string method;
  Index m = 0;
  int trial_index = 0;
  double l1_error = 0.0;
  double l2_error = 0.0;
  bool converged = false;
  int iterations = 0;
  double wall_time = 0.0;  // seconds
  std::string failure;     // non-empty when the solver threw
};

struct SummaryCell {
  std::string method;
  Index m = 0;
  double mean_l1 = 0.0;
  double mean_l2 = 0.0;
  double std_l1 = 0.0;
  double std_l2 = 0.0;
  int trials = 0;
  int converged = 0;
};

struct BenchmarkSummary {
  std::vector<SummaryCell> cells;
  const SummaryCell& at(const std::string& method, Index m) const;
};

struct BenchmarkReport {
  std::vector<TrialReport> trials;
  BenchmarkSummary summary;
};

// Seeds for one realization; identical for every method (paired trials).
std::uint64_t trial_signal_seed(std::uint64_t seed, int trial);
std::uint64_t trial_sensing_seed(std::uint64_t seed, Index m, int trial);

// Runs one method on one realization.
Eigen::MatrixXd recover_with(const MethodSpec& method, const Eigen::MatrixXd& measurements,
                             const Eigen::MatrixXd& sensing, const SolverConfig& config,
                             RecoveryResult* details = nullptr);

BenchmarkReport run_benchmark(const BenchmarkSpec& spec);

// Cells in (method, m) first-appearance order; std is 0 for single-trial cells.
BenchmarkSummary summarize(const std::vector<TrialReport>& trials);

// ---- cross-validation -------------------------------------------------------

struct TuningSample {
  Eigen::MatrixXd clean;
  Eigen::MatrixXd measurements;
  Eigen::MatrixXd sensing;
};

struct CrossValidationConfig {
  int folds = 10;
  // Candidate values per named parameter; the search runs over the product.
  std::vector<std::pair<std::string, std::vector<double>>> grid;
  double delta = 0.2;
  std::uint64_t seed = 0;

  void validate() const;
};

using ParameterPoint = std::map<std::string, double>;
using ProblemTemplate =
    std::function<RecoveryProblem(const TuningSample& sample, const ParameterPoint& params)>;

struct FoldRecord {
  int held_out = 0;
  std::size_t chosen_point = 0;   // index into CrossValidationReport::points
  double training_residual = 0.0; // mean residual over training groups at the chosen point
  double testing_residual = 0.0;  // held-out residual at the averaged parameters
};

struct CrossValidationReport {
  std::vector<ParameterPoint> points;
  // residuals[g][p]: ||xhat - x||_2 for group g at grid point p.
  std::vector<std::vector<double>> residuals;
  std::vector<std::vector<char>> converged;
  std::vector<FoldRecord> folds;
  ParameterPoint averaged;  // per-parameter mean of the fold choices
  double r_training = 0.0;
  double r_testing = 0.0;
  bool passed = false;
};

std::vector<ParameterPoint> expand_grid(
    const std::vector<std::pair<std::string, std::vector<double>>>& grid);

// T-fold tuning over T data groups. Fold t holds out group t and picks the
// grid point with the smallest mean residual over the other groups.
CrossValidationReport k_fold_tune(const std::vector<TuningSample>& groups,
                                  const ProblemTemplate& problem, const CrossValidationConfig& cv,
                                  const SolverConfig& solver = {});

}  // namespace mscs
