#pragma once

#include <Eigen/Dense>

#include <span>
#include <vector>

#include "mscs/ops.hpp"

namespace mscs {

// Ordered, disjoint, non-empty index sets that exactly cover 0..L-1.
class GroupStructure {
 public:
  explicit GroupStructure(std::vector<std::vector<Index>> blocks);

  // Consecutive blocks of `width` (the last one may be shorter).
  static GroupStructure contiguous(Index length, Index width);
  static GroupStructure singletons(Index length);
  static GroupStructure whole(Index length);
  // Pairs {k, k + length/2}: the (re, im) pairing of a real-stacked DFT output.
  static GroupStructure paired_halves(Index length);

  const std::vector<std::vector<Index>>& blocks() const { return blocks_; }
  Index length() const { return length_; }
  Index count() const { return static_cast<Index>(blocks_.size()); }

  // Sum over blocks of the block L2 norm.
  double norm(std::span<const double> v) const;

  enum class Layout { General, Contiguous, Singletons, PairedHalves };
  Layout layout() const { return layout_; }

 private:
  std::vector<std::vector<Index>> blocks_;
  Index length_ = 0;
  Layout layout_ = Layout::General;
};

// Soft thresholding: argmin_u t*||u||_1 + 0.5*||u - v||^2.
Eigen::VectorXd prox_l1(const Eigen::VectorXd& v, double t);
void prox_l1(std::span<const double> v, double t, std::span<double> out);

// Block shrinkage: argmin_u t*sum_d ||u_d||_2 + 0.5*||u - v||^2.
Eigen::VectorXd prox_group_l2(const Eigen::VectorXd& v, const GroupStructure& groups, double t);
void prox_group_l2(std::span<const double> v, const GroupStructure& groups, double t,
                   std::span<double> out);

// Singular value thresholding: argmin_U t*||U||_* + 0.5*||U - V||_F^2.
Eigen::MatrixXd prox_nuclear(const Eigen::MatrixXd& v, double t);

// Euclidean (Frobenius for matrices) projection onto {u : ||u - center|| <= radius}.
Eigen::MatrixXd project_l2_ball(const Eigen::MatrixXd& v, const Eigen::MatrixXd& center,
                                double radius);
void project_l2_ball(std::span<const double> v, std::span<const double> center, double radius,
                     std::span<double> out);

double nuclear_norm(const Eigen::MatrixXd& m);
Eigen::VectorXd singular_values(const Eigen::MatrixXd& m);

}  // namespace mscs
