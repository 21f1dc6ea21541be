#include <cmath>
#include <limits>

#include "mscs/error.hpp"
#include "mscs/eval.hpp"

namespace mscs {
namespace {

// Calls visit(support) for every k-subset of 0..n-1 in lexicographic order.
template <typename Visit>
void for_each_subset(Index n, int k, Visit&& visit) {
  std::vector<Index> idx(static_cast<std::size_t>(k));
  for (int i = 0; i < k; ++i) idx[static_cast<std::size_t>(i)] = i;
  while (true) {
    visit(idx);
    int i = k - 1;
    while (i >= 0 && idx[static_cast<std::size_t>(i)] == n - k + i) --i;
    if (i < 0) return;
    ++idx[static_cast<std::size_t>(i)];
    for (int j = i + 1; j < k; ++j) idx[static_cast<std::size_t>(j)] = idx[static_cast<std::size_t>(j - 1)] + 1;
  }
}

}  // namespace

L0Result l0_oracle(const Eigen::VectorXd& y, const Eigen::MatrixXd& phi, int k_max) {
  const Index n = phi.cols();
  if (y.size() != phi.rows()) throw DimensionError("l0_oracle: y does not match Phi");
  if (n > 16) throw DimensionError("l0_oracle is limited to n <= 16");
  if (k_max < 0 || k_max > 3) throw ParameterError("l0_oracle needs 0 <= k_max <= 3");

  const double tol = 1e-9 * std::max(1.0, y.norm());
  L0Result result;
  if (y.norm() <= tol) {
    result.found = true;
    result.estimate = Eigen::VectorXd::Zero(n);
    return result;
  }
  for (int k = 1; k <= std::min<Index>(k_max, n); ++k) {
    double best_norm = std::numeric_limits<double>::infinity();
    for_each_subset(n, k, [&](const std::vector<Index>& support) {
      Eigen::MatrixXd sub(phi.rows(), k);
      for (int j = 0; j < k; ++j) sub.col(j) = phi.col(support[static_cast<std::size_t>(j)]);
      const Eigen::VectorXd coef = sub.colPivHouseholderQr().solve(y);
      if ((sub * coef - y).norm() > tol) return;
      // Supports with a zero coefficient belong to a smaller cardinality.
      if ((coef.array().abs() <= tol).any()) return;
      if (coef.norm() < best_norm) {
        best_norm = coef.norm();
        result.found = true;
        result.support = support;
        result.estimate = Eigen::VectorXd::Zero(n);
        for (int j = 0; j < k; ++j) result.estimate(support[static_cast<std::size_t>(j)]) = coef(j);
      }
    });
    if (result.found) return result;
  }
  return result;
}

}  // namespace mscs
