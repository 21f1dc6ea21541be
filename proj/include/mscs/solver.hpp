#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "mscs/ops.hpp"
#include "mscs/prox.hpp"

namespace mscs {

enum class NormKind { L1, GroupL2L1, Nuclear };

// One weighted structure-inducing term  weight * f(Psi x).
struct Regularizer {
  AnalysisOperator op;
  NormKind norm = NormKind::L1;
  std::optional<GroupStructure> groups;  // GroupL2L1: indices into vec(Psi X)
  // Nuclear: shape the vec(Psi X) entries are reshaped to (column-major).
  // Empty means the natural L x R shape of Psi X.
  std::optional<std::pair<Index, Index>> nuclear_shape;
  double weight = 1.0;

  static Regularizer l1(AnalysisOperator op, double weight = 1.0);
  static Regularizer group_l2(AnalysisOperator op, GroupStructure groups, double weight = 1.0);
  static Regularizer nuclear(AnalysisOperator op, double weight = 1.0);

  // f(psi_x), without the weight.
  double value(const Eigen::MatrixXd& psi_x) const;
};

enum class RecoveryMode { Vector, Matrix };

// minimize sum_p weight_p f_p(Psi_p X)  subject to ||Y - Phi X|| <= epsilon.
// Phi acts column-wise on X; vector mode is the single-column case.
struct RecoveryProblem {
  Eigen::MatrixXd measurements;  // M x R
  Eigen::MatrixXd sensing;       // M x N
  double epsilon = 0.0;
  std::vector<Regularizer> regularizers;
  RecoveryMode mode = RecoveryMode::Vector;

  Index signal_length() const { return sensing.cols(); }
  Index columns() const { return measurements.cols(); }

  // Throws DimensionError / ParameterError / NonFiniteError.
  void validate() const;
  double objective(const Eigen::MatrixXd& x) const;
};

struct SolverConfig {
  int max_iterations = 2000;
  double abs_tolerance = 1e-6;
  double rel_tolerance = 1e-4;
  double penalty = 1.0;
  bool penalty_adaptation = true;
  std::optional<std::uint64_t> seed;  // unused by the deterministic solver; kept for provenance

  void validate() const;
};

struct RecoveryResult {
  Eigen::MatrixXd estimate;  // N x R
  bool converged = false;
  int iterations = 0;
  std::vector<double> primal_residual_history;
  std::vector<double> dual_residual_history;
  // Stopping thresholds the residuals were compared against, per iteration.
  std::vector<double> primal_tolerance_history;
  std::vector<double> dual_tolerance_history;
  std::vector<double> objective_history;
  double final_data_misfit = 0.0;
  double objective = 0.0;
  // The normal equations or pseudoinverse needed a ridge term.
  bool regularized_solve = false;

  Eigen::VectorXd estimate_vector() const { return estimate.col(0); }
};

// Consensus ADMM. Each regularizer gets an auxiliary copy of Psi_p X and the
// residual constraint gets a copy of Phi X; the X-update reuses one Cholesky
// factorization of sum_p Psi_p^T Psi_p + Phi^T Phi. The returned estimate is
// moved onto the residual ball by a minimum-norm correction, so it is always
// feasible when Phi has full row rank.
RecoveryResult solve(const RecoveryProblem& problem, const SolverConfig& config = {});

// min ||X||_F  subject to ||Y - Phi X||_F <= epsilon.
RecoveryResult least_squares_recover(const Eigen::MatrixXd& measurements,
                                     const Eigen::MatrixXd& sensing, double epsilon);

}  // namespace mscs
