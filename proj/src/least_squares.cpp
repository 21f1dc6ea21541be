#include <cmath>

#include "mscs/error.hpp"
#include "mscs/solver.hpp"

namespace mscs {

// Tikhonov path x(mu) = Phi^T (Phi Phi^T + mu I)^{-1} y: the residual grows
// monotonically with mu, so the minimum-norm point of the residual ball is
// x(mu*) with ||y - Phi x(mu*)|| = epsilon, found by bisection in log(mu).
RecoveryResult least_squares_recover(const Eigen::MatrixXd& measurements,
                                     const Eigen::MatrixXd& sensing, double epsilon) {
  if (sensing.rows() < 1 || sensing.cols() < 1) throw DimensionError("sensing matrix is empty");
  if (measurements.rows() != sensing.rows()) {
    throw DimensionError("measurement rows do not match the sensing matrix");
  }
  if (!std::isfinite(epsilon) || epsilon < 0.0) throw ParameterError("epsilon must be finite and >= 0");
  if (!sensing.allFinite() || !measurements.allFinite()) {
    throw NonFiniteError("least squares input has non-finite data");
  }

  const Index n = sensing.cols();
  const Index cols = measurements.cols();
  RecoveryResult result;
  result.converged = true;

  const double y_norm = measurements.norm();
  if (epsilon >= y_norm) {
    result.estimate = Eigen::MatrixXd::Zero(n, cols);
    result.final_data_misfit = y_norm;
    return result;
  }

  Eigen::BDCSVD<Eigen::MatrixXd> svd(sensing, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const Eigen::VectorXd& s = svd.singularValues();
  const double cutoff = s.size() > 0 ? s(0) * 1e-12 * static_cast<double>(std::max(n, sensing.rows())) : 0.0;
  Index rank = 0;
  while (rank < s.size() && s(rank) > cutoff) ++rank;
  if (rank < sensing.rows()) result.regularized_solve = true;

  const Eigen::MatrixXd coeffs = svd.matrixU().transpose() * measurements;  // k x R
  Eigen::VectorXd energy = coeffs.rowwise().squaredNorm();
  // Energy outside the column space of Phi, plus directions with zero gain.
  double unreachable = std::max(0.0, y_norm * y_norm - energy.sum());
  for (Index i = rank; i < energy.size(); ++i) unreachable += energy(i);

  auto residual_sq = [&](double mu) {
    double total = unreachable;
    for (Index i = 0; i < rank; ++i) {
      const double f = mu / (s(i) * s(i) + mu);
      total += f * f * energy(i);
    }
    return total;
  };

  double mu = 0.0;
  const double target = epsilon * epsilon;
  if (residual_sq(0.0) < target) {
    double hi = s(0) * s(0);
    while (residual_sq(hi) < target) hi *= 2.0;
    double lo = hi;
    while (residual_sq(lo) >= target && lo > 1e-300) lo *= 0.5;
    for (int it = 0; it < 200 && hi - lo > 1e-15 * hi; ++it) {
      const double mid = std::sqrt(lo * hi);
      if (residual_sq(mid) < target) lo = mid; else hi = mid;
    }
    mu = lo;
  }

  Eigen::MatrixXd scaled = coeffs.topRows(rank);
  for (Index i = 0; i < rank; ++i) scaled.row(i) *= s(i) / (s(i) * s(i) + mu);
  result.estimate = svd.matrixV().leftCols(rank) * scaled;
  result.final_data_misfit = (measurements - sensing * result.estimate).norm();
  return result;
}

}  // namespace mscs
