#include <cmath>
#include <limits>
#include <span>
#include <string>

#include "mscs/error.hpp"
#include "mscs/kernels.hpp"
#include "mscs/solver.hpp"

namespace mscs {
namespace {

std::span<const double> view(const Eigen::MatrixXd& m) {
  return {m.data(), static_cast<std::size_t>(m.size())};
}
std::span<double> view(Eigen::MatrixXd& m) { return {m.data(), static_cast<std::size_t>(m.size())}; }

double frob(const Eigen::MatrixXd& m) { return std::sqrt(kernels::sum_squares(view(m))); }

std::pair<Index, Index> nuclear_shape_of(const Regularizer& reg, Index rows, Index cols) {
  if (reg.nuclear_shape) return *reg.nuclear_shape;
  return {rows, cols};
}

// In-place prox of t * f on a block variable.
void apply_prox(const Regularizer& reg, Eigen::MatrixXd& v, double t) {
  switch (reg.norm) {
    case NormKind::L1: kernels::soft_threshold(view(v), t, view(v)); return;
    case NormKind::GroupL2L1: prox_group_l2(view(v), *reg.groups, t, view(v)); return;
    case NormKind::Nuclear: {
      const auto [r, c] = nuclear_shape_of(reg, v.rows(), v.cols());
      Eigen::Map<Eigen::MatrixXd> shaped(v.data(), r, c);
      shaped = prox_nuclear(Eigen::MatrixXd(shaped), t);
      return;
    }
  }
}

// Over-relaxation factor of the splitting iteration.
constexpr double kRelaxation = 1.6;

// Regularizer block working on gain * Psi x with weight / gain, which leaves
// the positively homogeneous objective unchanged.
struct Block {
  const Regularizer* reg;
  double gain;
  Eigen::MatrixXd z;
  Eigen::MatrixXd u;
};

// Largest eigenvalue of a symmetric positive semidefinite matrix.
double top_eigenvalue(const Eigen::MatrixXd& gram) {
  Eigen::VectorXd v = Eigen::VectorXd::LinSpaced(gram.rows(), 1.0, 2.0);
  double lambda = 0.0;
  for (int it = 0; it < 100; ++it) {
    const Eigen::VectorXd next = gram * v;
    const double norm = next.norm();
    if (norm == 0.0) return 0.0;
    const double previous = lambda;
    lambda = v.dot(next) / v.squaredNorm();
    v = next / norm;
    if (std::abs(lambda - previous) <= 1e-6 * lambda) break;
  }
  return lambda;
}

double gain_for(const Eigen::MatrixXd& gram) {
  const double top = top_eigenvalue(gram);
  return top > 0.0 ? 1.0 / std::sqrt(top) : 1.0;
}

// Sum of K_b^T parts_b over all blocks, the residual block last.
Eigen::MatrixXd stacked_adjoint(const std::vector<Block>& blocks, bool use_z, const Eigen::MatrixXd& phi,
                                double phi_gain, const Eigen::MatrixXd& tail) {
  Eigen::MatrixXd out = phi_gain * (phi.transpose() * tail);
  for (const auto& b : blocks) out += b.gain * b.reg->op.adjoint_columns(use_z ? b.z : b.u);
  return out;
}

}  // namespace

Regularizer Regularizer::l1(AnalysisOperator op, double weight) {
  Regularizer r{std::move(op), NormKind::L1, std::nullopt, std::nullopt, 1.0};
  r.norm = NormKind::L1;
  r.weight = weight;
  return r;
}

Regularizer Regularizer::group_l2(AnalysisOperator op, GroupStructure groups, double weight) {
  Regularizer r{std::move(op), NormKind::L1, std::nullopt, std::nullopt, 1.0};
  r.norm = NormKind::GroupL2L1;
  r.groups = std::move(groups);
  r.weight = weight;
  return r;
}

Regularizer Regularizer::nuclear(AnalysisOperator op, double weight) {
  Regularizer r{std::move(op), NormKind::L1, std::nullopt, std::nullopt, 1.0};
  r.norm = NormKind::Nuclear;
  r.weight = weight;
  return r;
}

double Regularizer::value(const Eigen::MatrixXd& psi_x) const {
  switch (norm) {
    case NormKind::L1: return kernels::sum_abs(view(psi_x));
    case NormKind::GroupL2L1: return groups->norm(view(psi_x));
    case NormKind::Nuclear: {
      const auto [r, c] = nuclear_shape_of(*this, psi_x.rows(), psi_x.cols());
      return nuclear_norm(Eigen::Map<const Eigen::MatrixXd>(psi_x.data(), r, c));
    }
  }
  return 0.0;
}

void RecoveryProblem::validate() const {
  const Index m = sensing.rows();
  const Index n = sensing.cols();
  if (m < 1 || n < 1) throw DimensionError("sensing matrix is empty");
  if (measurements.rows() != m) {
    throw DimensionError("measurements have " + std::to_string(measurements.rows()) +
                         " rows but the sensing matrix has " + std::to_string(m));
  }
  if (measurements.cols() < 1) throw DimensionError("measurements have no columns");
  if (mode == RecoveryMode::Vector && measurements.cols() != 1) {
    throw DimensionError("vector mode needs a single measurement column");
  }
  if (!std::isfinite(epsilon) || epsilon < 0.0) throw ParameterError("epsilon must be finite and >= 0");
  if (!sensing.allFinite() || !measurements.allFinite()) {
    throw NonFiniteError("recovery problem has non-finite data");
  }
  for (const auto& reg : regularizers) {
    if (!std::isfinite(reg.weight) || reg.weight < 0.0) {
      throw ParameterError("regularizer weight must be finite and >= 0");
    }
    if (reg.op.cols() != n) {
      throw DimensionError("regularizer operator expects " + std::to_string(reg.op.cols()) +
                           " inputs but the signal length is " + std::to_string(n));
    }
    const Index entries = reg.op.rows() * measurements.cols();
    if (reg.norm == NormKind::GroupL2L1) {
      if (!reg.groups) throw ParameterError("group regularizer without a group structure");
      if (reg.groups->length() != entries) {
        throw DimensionError("group structure covers " + std::to_string(reg.groups->length()) +
                             " entries, operator output has " + std::to_string(entries));
      }
    }
    if (reg.norm == NormKind::Nuclear && reg.nuclear_shape) {
      const auto [r, c] = *reg.nuclear_shape;
      if (r < 1 || c < 1 || r * c != entries) throw DimensionError("nuclear reshape does not fit");
    }
  }
}

double RecoveryProblem::objective(const Eigen::MatrixXd& x) const {
  double total = 0.0;
  for (const auto& reg : regularizers) {
    if (reg.weight > 0.0) total += reg.weight * reg.value(reg.op.apply_columns(x));
  }
  return total;
}

void SolverConfig::validate() const {
  if (max_iterations < 1) throw ParameterError("max_iterations must be positive");
  if (!(abs_tolerance > 0.0) || !(rel_tolerance > 0.0)) {
    throw ParameterError("tolerances must be positive");
  }
  if (!(penalty > 0.0)) throw ParameterError("penalty must be positive");
}

RecoveryResult solve(const RecoveryProblem& problem, const SolverConfig& config) {
  problem.validate();
  config.validate();

  std::vector<const Regularizer*> active;
  for (const auto& reg : problem.regularizers) {
    if (reg.weight > 0.0) active.push_back(&reg);
  }
  if (active.empty()) {
    // Every feasible point is optimal; report the minimum-norm one.
    return least_squares_recover(problem.measurements, problem.sensing, problem.epsilon);
  }

  const Eigen::MatrixXd& phi = problem.sensing;
  const Index n = phi.cols();
  const Index cols = problem.measurements.cols();

  RecoveryResult result;
  const double scale = frob(problem.measurements);
  if (scale == 0.0) {
    // X = 0 is feasible and every regularizer vanishes there.
    result.estimate = Eigen::MatrixXd::Zero(n, cols);
    result.converged = true;
    return result;
  }

  // Work on the problem normalized to ||Y|| = 1; the objective is positively
  // homogeneous so the solution scales back exactly.
  // Each block is also equilibrated to unit operator norm; the residual ball
  // shrinks with Phi so the feasible set is the same.
  const Eigen::MatrixXd phi_gram = phi.transpose() * phi;
  const double phi_gain = gain_for(phi_gram);
  const Eigen::MatrixXd y = problem.measurements * (phi_gain / scale);
  const double eps = problem.epsilon * (phi_gain / scale);

  Eigen::MatrixXd normal = phi_gram * (phi_gain * phi_gain);
  std::vector<double> gains;
  for (const Regularizer* reg : active) {
    const Eigen::MatrixXd gram = reg->op.gram();
    gains.push_back(gain_for(gram));
    normal += gram * (gains.back() * gains.back());
  }
  Eigen::LLT<Eigen::MatrixXd> llt(normal);
  if (llt.info() != Eigen::Success) {
    const double ridge = 1e-10 * std::max(1.0, normal.trace() / static_cast<double>(n));
    normal.diagonal().array() += ridge;
    llt.compute(normal);
    result.regularized_solve = true;
    if (llt.info() != Eigen::Success) throw NonFiniteError("normal equations are not factorizable");
  }
  const Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> pinv(phi);
  if (pinv.rank() < phi.rows()) result.regularized_solve = true;

  // With epsilon = 0 the x-update is solved on the affine set Phi x = y
  // through the Schur complement, and the residual block stays pinned at y.
  const bool exact = eps == 0.0;
  Eigen::MatrixXd normal_inv_phit;
  Eigen::LDLT<Eigen::MatrixXd> schur;
  if (exact) {
    normal_inv_phit = llt.solve(phi_gain * phi.transpose());
    schur.compute(phi_gain * (phi * normal_inv_phit));
  }

  Eigen::MatrixXd x = pinv.solve(y) / phi_gain;
  std::vector<Block> blocks;
  Index total_rows = phi.rows() * cols;
  for (std::size_t i = 0; i < active.size(); ++i) {
    Eigen::MatrixXd z = gains[i] * active[i]->op.apply_columns(x);
    Eigen::MatrixXd u = Eigen::MatrixXd::Zero(z.rows(), z.cols());
    total_rows += z.size();
    blocks.push_back({active[i], gains[i], std::move(z), std::move(u)});
  }
  Eigen::MatrixXd w = project_l2_ball(phi_gain * (phi * x), y, eps);
  Eigen::MatrixXd u_w = Eigen::MatrixXd::Zero(w.rows(), w.cols());

  Eigen::MatrixXd kt_z = stacked_adjoint(blocks, true, phi, phi_gain, w);
  Eigen::MatrixXd kt_u = Eigen::MatrixXd::Zero(n, cols);

  double rho = config.penalty;
  const double sqrt_rows = std::sqrt(static_cast<double>(total_rows));
  const double sqrt_n = std::sqrt(static_cast<double>(n * cols));

  Eigen::MatrixXd best_x = x;
  double best_score = std::numeric_limits<double>::infinity();

  Eigen::MatrixXd v, relaxed;
  for (int iter = 0; iter < config.max_iterations; ++iter) {
    x = llt.solve(kt_z - kt_u);
    if (exact) x -= normal_inv_phit * schur.solve(phi_gain * (phi * x) - y);

    double primal_sq = 0.0;
    double kx_sq = 0.0;
    double z_sq = 0.0;
    double objective = 0.0;
    for (auto& b : blocks) {
      v = b.gain * b.reg->op.apply_columns(x);
      const double weight = b.reg->weight / b.gain;
      objective += weight * b.reg->value(v);
      kx_sq += kernels::sum_squares(view(v));
      relaxed = kRelaxation * v + (1.0 - kRelaxation) * b.z;
      b.z = relaxed + b.u;
      apply_prox(*b.reg, b.z, weight / rho);
      b.u += relaxed - b.z;
      primal_sq += kernels::squared_distance(view(v), view(b.z));
      z_sq += kernels::sum_squares(view(b.z));
    }
    v = phi_gain * (phi * x);
    kx_sq += kernels::sum_squares(view(v));
    if (!exact) {
      relaxed = kRelaxation * v + (1.0 - kRelaxation) * w;
      w = relaxed + u_w;
      project_l2_ball(view(w), view(y), eps, view(w));
      u_w += relaxed - w;
    }
    primal_sq += kernels::squared_distance(view(v), view(w));
    z_sq += kernels::sum_squares(view(w));

    Eigen::MatrixXd kt_z_next = stacked_adjoint(blocks, true, phi, phi_gain, w);
    kt_u = stacked_adjoint(blocks, false, phi, phi_gain, u_w);
    const double primal = std::sqrt(primal_sq);
    const double dual = rho * std::sqrt(kernels::squared_distance(view(kt_z_next), view(kt_z)));
    kt_z = std::move(kt_z_next);

    const double eps_primal =
        sqrt_rows * config.abs_tolerance + config.rel_tolerance * std::sqrt(std::max(kx_sq, z_sq));
    const double eps_dual = sqrt_n * config.abs_tolerance + config.rel_tolerance * rho * frob(kt_u);

    result.primal_residual_history.push_back(primal * scale);
    result.dual_residual_history.push_back(dual * scale);
    result.primal_tolerance_history.push_back(eps_primal * scale);
    result.dual_tolerance_history.push_back(eps_dual * scale);
    result.objective_history.push_back(objective * scale);
    result.iterations = iter + 1;

    const double score = std::max(primal / eps_primal, dual / eps_dual);
    if (score < best_score) {
      best_score = score;
      best_x = x;
    }
    if (primal <= eps_primal && dual <= eps_dual) {
      result.converged = true;
      break;
    }

    if (config.penalty_adaptation) {
      double factor = 1.0;
      if (primal > 10.0 * dual) {
        factor = 2.0;
      } else if (dual > 10.0 * primal) {
        factor = 0.5;
      }
      if (factor != 1.0) {
        rho *= factor;
        for (auto& b : blocks) b.u /= factor;
        u_w /= factor;
        kt_u /= factor;
      }
    }
  }

  Eigen::MatrixXd estimate = result.converged ? x : best_x;

  // Minimum-norm correction onto the residual ball.
  const Eigen::MatrixXd residual = y - phi_gain * (phi * estimate);
  const double misfit = frob(residual);
  if (misfit > eps) estimate += pinv.solve(residual * (1.0 - eps / misfit)) / phi_gain;

  result.estimate = estimate * scale;
  result.final_data_misfit = frob(problem.measurements - phi * result.estimate);
  result.objective = problem.objective(result.estimate);
  return result;
}

}  // namespace mscs
