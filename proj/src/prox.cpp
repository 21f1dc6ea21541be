#include <cmath>
#include <string>

#include "mscs/error.hpp"
#include "mscs/kernels.hpp"
#include "mscs/prox.hpp"

namespace mscs {
namespace {

void require_threshold(double t) {
  if (!(t >= 0.0)) throw ParameterError("threshold must be non-negative");
}

std::span<const double> view(const Eigen::MatrixXd& m) {
  return {m.data(), static_cast<std::size_t>(m.size())};
}
std::span<double> view(Eigen::MatrixXd& m) { return {m.data(), static_cast<std::size_t>(m.size())}; }
std::span<const double> view(const Eigen::VectorXd& v) {
  return {v.data(), static_cast<std::size_t>(v.size())};
}
std::span<double> view(Eigen::VectorXd& v) { return {v.data(), static_cast<std::size_t>(v.size())}; }

}  // namespace

GroupStructure::GroupStructure(std::vector<std::vector<Index>> blocks) : blocks_(std::move(blocks)) {
  for (const auto& block : blocks_) {
    if (block.empty()) throw DimensionError("group structure has an empty block");
    length_ += static_cast<Index>(block.size());
  }
  if (length_ == 0) throw DimensionError("group structure is empty");
  std::vector<char> seen(static_cast<std::size_t>(length_), 0);
  bool contiguous = true;
  Index expected = 0;
  for (const auto& block : blocks_) {
    for (Index i : block) {
      if (i < 0 || i >= length_) {
        throw DimensionError("group index " + std::to_string(i) + " outside 0.." +
                             std::to_string(length_ - 1));
      }
      if (seen[static_cast<std::size_t>(i)]) {
        throw DimensionError("group index " + std::to_string(i) + " appears twice");
      }
      seen[static_cast<std::size_t>(i)] = 1;
      contiguous = contiguous && i == expected;
      ++expected;
    }
  }
  if (contiguous) {
    layout_ = count() == length_ ? Layout::Singletons : Layout::Contiguous;
    return;
  }
  if (length_ % 2 == 0 && count() == length_ / 2) {
    bool paired = true;
    for (Index k = 0; k < count() && paired; ++k) {
      const auto& block = blocks_[static_cast<std::size_t>(k)];
      paired = block.size() == 2 && block[0] == k && block[1] == k + length_ / 2;
    }
    if (paired) layout_ = Layout::PairedHalves;
  }
}

GroupStructure GroupStructure::contiguous(Index length, Index width) {
  if (length < 1 || width < 1) throw DimensionError("contiguous groups need positive sizes");
  std::vector<std::vector<Index>> blocks;
  for (Index start = 0; start < length; start += width) {
    std::vector<Index> block;
    for (Index i = start; i < std::min(length, start + width); ++i) block.push_back(i);
    blocks.push_back(std::move(block));
  }
  return GroupStructure(std::move(blocks));
}

GroupStructure GroupStructure::singletons(Index length) { return contiguous(length, 1); }

GroupStructure GroupStructure::whole(Index length) { return contiguous(length, length); }

GroupStructure GroupStructure::paired_halves(Index length) {
  if (length < 2 || length % 2 != 0) throw DimensionError("paired groups need an even length");
  std::vector<std::vector<Index>> blocks;
  for (Index k = 0; k < length / 2; ++k) blocks.push_back({k, k + length / 2});
  return GroupStructure(std::move(blocks));
}

double GroupStructure::norm(std::span<const double> v) const {
  if (static_cast<Index>(v.size()) != length_) throw DimensionError("group norm length mismatch");
  if (layout_ == Layout::Singletons) return kernels::sum_abs(v);
  double total = 0.0;
  if (layout_ == Layout::Contiguous) {
    std::size_t offset = 0;
    for (const auto& block : blocks_) {
      total += std::sqrt(kernels::sum_squares(v.subspan(offset, block.size())));
      offset += block.size();
    }
    return total;
  }
  for (const auto& block : blocks_) {
    double sq = 0.0;
    for (Index i : block) sq += v[static_cast<std::size_t>(i)] * v[static_cast<std::size_t>(i)];
    total += std::sqrt(sq);
  }
  return total;
}

Eigen::VectorXd prox_l1(const Eigen::VectorXd& v, double t) {
  Eigen::VectorXd out(v.size());
  prox_l1(view(v), t, view(out));
  return out;
}

void prox_l1(std::span<const double> v, double t, std::span<double> out) {
  require_threshold(t);
  if (v.size() != out.size()) throw DimensionError("prox_l1 output size mismatch");
  kernels::soft_threshold(v, t, out);
}

Eigen::VectorXd prox_group_l2(const Eigen::VectorXd& v, const GroupStructure& groups, double t) {
  Eigen::VectorXd out(v.size());
  prox_group_l2(view(v), groups, t, view(out));
  return out;
}

void prox_group_l2(std::span<const double> v, const GroupStructure& groups, double t,
                   std::span<double> out) {
  require_threshold(t);
  if (static_cast<Index>(v.size()) != groups.length() || out.size() != v.size()) {
    throw DimensionError("prox_group_l2: vector length does not match the group structure");
  }
  switch (groups.layout()) {
    case GroupStructure::Layout::Singletons:
      kernels::soft_threshold(v, t, out);
      return;
    case GroupStructure::Layout::PairedHalves: {
      const std::size_t half = v.size() / 2;
      kernels::modulus_shrink(v.first(half), v.subspan(half), t, out.first(half),
                              out.subspan(half));
      return;
    }
    case GroupStructure::Layout::Contiguous: {
      std::size_t offset = 0;
      for (const auto& block : groups.blocks()) {
        const auto in_block = v.subspan(offset, block.size());
        const double norm = std::sqrt(kernels::sum_squares(in_block));
        // Zero-norm blocks fall through to a zero scale without dividing.
        const double s = norm > t ? 1.0 - t / norm : 0.0;
        kernels::scale(in_block, s, out.subspan(offset, block.size()));
        offset += block.size();
      }
      return;
    }
    case GroupStructure::Layout::General:
      for (const auto& block : groups.blocks()) {
        double sq = 0.0;
        for (Index i : block) sq += v[static_cast<std::size_t>(i)] * v[static_cast<std::size_t>(i)];
        const double norm = std::sqrt(sq);
        const double s = norm > t ? 1.0 - t / norm : 0.0;
        for (Index i : block) out[static_cast<std::size_t>(i)] = s * v[static_cast<std::size_t>(i)];
      }
      return;
  }
}

Eigen::VectorXd singular_values(const Eigen::MatrixXd& m) {
  if (!m.allFinite()) throw NonFiniteError("SVD of a matrix with non-finite entries");
  Eigen::BDCSVD<Eigen::MatrixXd> svd(m);
  if (svd.info() == Eigen::Success && svd.singularValues().allFinite()) return svd.singularValues();
  return Eigen::JacobiSVD<Eigen::MatrixXd>(m).singularValues();
}

double nuclear_norm(const Eigen::MatrixXd& m) { return singular_values(m).sum(); }

namespace {

template <typename Svd>
Eigen::MatrixXd shrink_singular_values(const Svd& svd, double t, Index rows, Index cols) {
  const Eigen::VectorXd& sigma = svd.singularValues();
  Index keep = 0;
  while (keep < sigma.size() && sigma(keep) > t) ++keep;
  if (keep == 0) return Eigen::MatrixXd::Zero(rows, cols);
  const Eigen::VectorXd shrunk = (sigma.head(keep).array() - t).matrix();
  return svd.matrixU().leftCols(keep) * shrunk.asDiagonal() * svd.matrixV().leftCols(keep).transpose();
}

}  // namespace

Eigen::MatrixXd prox_nuclear(const Eigen::MatrixXd& v, double t) {
  require_threshold(t);
  if (!v.allFinite()) throw NonFiniteError("SVD of a matrix with non-finite entries");
  if (v.size() == 0) return v;
  constexpr unsigned kThin = Eigen::ComputeThinU | Eigen::ComputeThinV;
  Eigen::BDCSVD<Eigen::MatrixXd> svd(v, kThin);
  if (svd.info() == Eigen::Success && svd.singularValues().allFinite() && svd.matrixU().allFinite() &&
      svd.matrixV().allFinite()) {
    return shrink_singular_values(svd, t, v.rows(), v.cols());
  }
  // Eigen 3.4.0 divide-and-conquer can return NaN on nearly repeated
  // singular values; one-sided Jacobi is slower but always finite.
  Eigen::JacobiSVD<Eigen::MatrixXd> jacobi(v, kThin);
  return shrink_singular_values(jacobi, t, v.rows(), v.cols());
}

Eigen::MatrixXd project_l2_ball(const Eigen::MatrixXd& v, const Eigen::MatrixXd& center,
                                double radius) {
  if (v.rows() != center.rows() || v.cols() != center.cols()) {
    throw DimensionError("project_l2_ball: shapes differ");
  }
  Eigen::MatrixXd out(v.rows(), v.cols());
  project_l2_ball(view(v), view(center), radius, view(out));
  return out;
}

void project_l2_ball(std::span<const double> v, std::span<const double> center, double radius,
                     std::span<double> out) {
  if (!(radius >= 0.0)) throw ParameterError("ball radius must be non-negative");
  if (v.size() != center.size() || v.size() != out.size()) {
    throw DimensionError("project_l2_ball: shapes differ");
  }
  const double dist = std::sqrt(kernels::squared_distance(v, center));
  if (dist <= radius) {
    if (out.data() != v.data()) std::copy(v.begin(), v.end(), out.begin());
    return;
  }
  kernels::blend(center, v, radius / dist, out);
}

}  // namespace mscs
