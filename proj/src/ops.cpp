#include <cmath>
#include <numbers>
#include <sstream>

#include "mscs/error.hpp"
#include "mscs/ops.hpp"

namespace mscs {

struct AnalysisOperator::Impl {
  Kind kind = Kind::Identity;
  Index rows = 0;
  Index cols = 0;
  // ExplicitMatrix and Dft.
  Eigen::MatrixXd matrix;
  // Difference.
  int order = 1;
  DiffDirection direction = DiffDirection::Forward;
  DiffBoundary boundary = DiffBoundary::Truncated;
  // Wavelet.
  WaveletFamily family = WaveletFamily::Haar;
  int levels = 0;
  // BlockPartition.
  std::vector<std::vector<Index>> blocks;
};

namespace {

void require_positive(Index n, const char* what) {
  if (n < 1) throw DimensionError(std::string(what) + " must be at least 1");
}

// Rows contributed by one direction of a difference operator.
Index difference_rows(const AnalysisOperator::Impl& d) {
  return d.boundary == DiffBoundary::Truncated ? d.cols - d.order : d.cols;
}

// sign = -1 for forward (-x[r] + x[r+lag]), +1 for backward (x[r] - x[r+lag]).
void difference_apply(double sign, int lag, Index n, Index out_rows, const double* x, double* out) {
  for (Index r = 0; r < out_rows; ++r) {
    const double tail = r + lag < n ? x[r + lag] : 0.0;
    out[r] = sign * (x[r] - tail);
  }
}

void difference_adjoint(double sign, int lag, Index n, Index in_rows, const double* u, double* out) {
  for (Index r = 0; r < in_rows; ++r) {
    out[r] += sign * u[r];
    if (r + lag < n) out[r + lag] -= sign * u[r];
  }
}

}  // namespace

Eigen::VectorXd ComplexStackedVector::stacked() const {
  if (real_part.size() != imag_part.size()) {
    throw DimensionError("complex parts differ in length");
  }
  Eigen::VectorXd out(2 * real_part.size());
  out << real_part, imag_part;
  return out;
}

ComplexStackedVector ComplexStackedVector::from_stacked(const Eigen::VectorXd& stacked) {
  if (stacked.size() % 2 != 0) throw DimensionError("stacked complex vector has odd length");
  const Index n = stacked.size() / 2;
  return {stacked.head(n), stacked.tail(n)};
}

AnalysisOperator::AnalysisOperator(std::shared_ptr<const Impl> impl) : impl_(std::move(impl)) {}

AnalysisOperator AnalysisOperator::identity(Index n) {
  require_positive(n, "identity size");
  auto impl = std::make_shared<Impl>();
  impl->kind = Kind::Identity;
  impl->rows = impl->cols = n;
  return AnalysisOperator(std::move(impl));
}

AnalysisOperator AnalysisOperator::explicit_matrix(Eigen::MatrixXd matrix) {
  require_positive(matrix.rows(), "matrix rows");
  require_positive(matrix.cols(), "matrix cols");
  if (!matrix.allFinite()) throw NonFiniteError("explicit operator has non-finite entries");
  auto impl = std::make_shared<Impl>();
  impl->kind = Kind::ExplicitMatrix;
  impl->rows = matrix.rows();
  impl->cols = matrix.cols();
  impl->matrix = std::move(matrix);
  return AnalysisOperator(std::move(impl));
}

AnalysisOperator AnalysisOperator::dft(Index n) {
  require_positive(n, "DFT size");
  auto impl = std::make_shared<Impl>();
  impl->kind = Kind::Dft;
  impl->rows = 2 * n;
  impl->cols = n;
  impl->matrix.resize(2 * n, n);
  const double norm = 1.0 / std::sqrt(static_cast<double>(n));
  for (Index k = 0; k < n; ++k) {
    for (Index j = 0; j < n; ++j) {
      // Reduce k*j mod n first so the angle stays accurate for large n.
      const double angle = 2.0 * std::numbers::pi * static_cast<double>((k * j) % n) /
                           static_cast<double>(n);
      impl->matrix(k, j) = norm * std::cos(angle);
      impl->matrix(n + k, j) = -norm * std::sin(angle);
    }
  }
  return AnalysisOperator(std::move(impl));
}

AnalysisOperator AnalysisOperator::difference(int order, DiffDirection direction,
                                              DiffBoundary boundary, Index n) {
  if (order < 1) throw DimensionError("difference order must be at least 1");
  if (n <= order) throw DimensionError("difference operator needs n > order");
  auto impl = std::make_shared<Impl>();
  impl->kind = Kind::Difference;
  impl->order = order;
  impl->direction = direction;
  impl->boundary = boundary;
  impl->cols = n;
  const Index one_way = difference_rows(*impl);
  impl->rows = direction == DiffDirection::Stacked ? 2 * one_way : one_way;
  return AnalysisOperator(std::move(impl));
}

AnalysisOperator AnalysisOperator::wavelet(WaveletFamily family, int levels, Index n) {
  require_positive(n, "wavelet size");
  if (levels < 0) throw DimensionError("wavelet levels must be non-negative");
  if (levels == 0) {
    Index m = n;
    while (m % 2 == 0) {
      m /= 2;
      ++levels;
    }
    if (levels == 0) throw DimensionError("wavelet transform needs an even signal length");
  } else if (levels >= 63 || n % (Index{1} << levels) != 0) {
    throw DimensionError("signal length must be divisible by 2^levels");
  }
  auto impl = std::make_shared<Impl>();
  impl->kind = Kind::Wavelet;
  impl->rows = impl->cols = n;
  impl->family = family;
  impl->levels = levels;
  return AnalysisOperator(std::move(impl));
}

AnalysisOperator AnalysisOperator::block_partition(std::vector<std::vector<Index>> blocks,
                                                   Index n) {
  require_positive(n, "block partition size");
  Index total = 0;
  for (const auto& block : blocks) {
    if (block.empty()) throw DimensionError("empty block in partition");
    for (Index i : block) {
      if (i < 0 || i >= n) throw DimensionError("block index out of range");
    }
    total += static_cast<Index>(block.size());
  }
  require_positive(total, "block partition rows");
  auto impl = std::make_shared<Impl>();
  impl->kind = Kind::BlockPartition;
  impl->rows = total;
  impl->cols = n;
  impl->blocks = std::move(blocks);
  return AnalysisOperator(std::move(impl));
}

AnalysisOperator::Kind AnalysisOperator::kind() const { return impl_->kind; }
Index AnalysisOperator::rows() const { return impl_->rows; }
Index AnalysisOperator::cols() const { return impl_->cols; }

const std::vector<std::vector<Index>>& AnalysisOperator::blocks() const { return impl_->blocks; }

std::string AnalysisOperator::describe() const {
  std::ostringstream os;
  switch (impl_->kind) {
    case Kind::Identity: os << "identity"; break;
    case Kind::ExplicitMatrix: os << "matrix"; break;
    case Kind::Dft: os << "dft"; break;
    case Kind::Difference:
      os << "difference(order=" << impl_->order << ", "
         << (impl_->direction == DiffDirection::Forward    ? "forward"
             : impl_->direction == DiffDirection::Backward ? "backward"
                                                           : "stacked")
         << ", " << (impl_->boundary == DiffBoundary::Truncated ? "truncated" : "full")
         << ")";
      break;
    case Kind::Wavelet:
      os << "wavelet(" << to_string(impl_->family) << ", levels=" << impl_->levels << ")";
      break;
    case Kind::BlockPartition: os << "blocks(" << impl_->blocks.size() << ")"; break;
  }
  os << " " << impl_->rows << "x" << impl_->cols;
  return os.str();
}

bool AnalysisOperator::is_orthonormal() const {
  return impl_->kind == Kind::Identity || impl_->kind == Kind::Dft ||
         impl_->kind == Kind::Wavelet;
}

Eigen::VectorXd AnalysisOperator::apply(const Eigen::VectorXd& x) const {
  return apply_columns(x);
}

Eigen::VectorXd AnalysisOperator::adjoint(const Eigen::VectorXd& u) const {
  return adjoint_columns(u);
}

Eigen::MatrixXd AnalysisOperator::apply_columns(const Eigen::MatrixXd& x) const {
  const Impl& d = *impl_;
  if (x.rows() != d.cols) {
    throw DimensionError("operator expects " + std::to_string(d.cols) + " rows, got " +
                         std::to_string(x.rows()));
  }
  switch (d.kind) {
    case Kind::Identity: return x;
    case Kind::ExplicitMatrix:
    case Kind::Dft: return d.matrix * x;
    case Kind::Difference: {
      Eigen::MatrixXd out(d.rows, x.cols());
      const Index one_way = difference_rows(d);
      for (Index c = 0; c < x.cols(); ++c) {
        const double* col = x.col(c).data();
        double* dst = out.col(c).data();
        if (d.direction != DiffDirection::Backward) {
          difference_apply(-1.0, d.order, d.cols, one_way, col, dst);
          dst += one_way;
        }
        if (d.direction != DiffDirection::Forward) {
          difference_apply(1.0, d.order, d.cols, one_way, col, dst);
        }
      }
      return out;
    }
    case Kind::Wavelet: {
      Eigen::MatrixXd out(d.rows, x.cols());
      const auto& h = detail::wavelet_lowpass(d.family);
      for (Index c = 0; c < x.cols(); ++c) {
        detail::wavelet_forward(h, d.levels, x.col(c).data(), out.col(c).data(), d.cols);
      }
      return out;
    }
    case Kind::BlockPartition: {
      Eigen::MatrixXd out(d.rows, x.cols());
      for (Index c = 0; c < x.cols(); ++c) {
        Index row = 0;
        for (const auto& block : d.blocks) {
          for (Index i : block) out(row++, c) = x(i, c);
        }
      }
      return out;
    }
  }
  return x;
}

Eigen::MatrixXd AnalysisOperator::adjoint_columns(const Eigen::MatrixXd& u) const {
  const Impl& d = *impl_;
  if (u.rows() != d.rows) {
    throw DimensionError("adjoint expects " + std::to_string(d.rows) + " rows, got " +
                         std::to_string(u.rows()));
  }
  switch (d.kind) {
    case Kind::Identity: return u;
    case Kind::ExplicitMatrix:
    case Kind::Dft: return d.matrix.transpose() * u;
    case Kind::Difference: {
      Eigen::MatrixXd out = Eigen::MatrixXd::Zero(d.cols, u.cols());
      const Index one_way = difference_rows(d);
      for (Index c = 0; c < u.cols(); ++c) {
        const double* src = u.col(c).data();
        double* dst = out.col(c).data();
        if (d.direction != DiffDirection::Backward) {
          difference_adjoint(-1.0, d.order, d.cols, one_way, src, dst);
          src += one_way;
        }
        if (d.direction != DiffDirection::Forward) {
          difference_adjoint(1.0, d.order, d.cols, one_way, src, dst);
        }
      }
      return out;
    }
    case Kind::Wavelet: {
      Eigen::MatrixXd out(d.cols, u.cols());
      const auto& h = detail::wavelet_lowpass(d.family);
      for (Index c = 0; c < u.cols(); ++c) {
        detail::wavelet_inverse(h, d.levels, u.col(c).data(), out.col(c).data(), d.cols);
      }
      return out;
    }
    case Kind::BlockPartition: {
      Eigen::MatrixXd out = Eigen::MatrixXd::Zero(d.cols, u.cols());
      for (Index c = 0; c < u.cols(); ++c) {
        Index row = 0;
        for (const auto& block : d.blocks) {
          for (Index i : block) out(i, c) += u(row++, c);
        }
      }
      return out;
    }
  }
  return u;
}

ComplexStackedVector AnalysisOperator::apply_complex(const Eigen::VectorXd& x) const {
  if (impl_->kind != Kind::Dft) throw DimensionError("apply_complex requires a DFT operator");
  return ComplexStackedVector::from_stacked(apply(x));
}

Eigen::VectorXd AnalysisOperator::adjoint(const ComplexStackedVector& u) const {
  if (impl_->kind != Kind::Dft) throw DimensionError("complex adjoint requires a DFT operator");
  return adjoint(u.stacked());
}

Eigen::MatrixXd AnalysisOperator::to_dense() const {
  return apply_columns(Eigen::MatrixXd::Identity(impl_->cols, impl_->cols));
}

Eigen::MatrixXd AnalysisOperator::gram() const {
  if (is_orthonormal()) return Eigen::MatrixXd::Identity(impl_->cols, impl_->cols);
  if (impl_->kind == Kind::ExplicitMatrix) return impl_->matrix.transpose() * impl_->matrix;
  const Eigen::MatrixXd dense = to_dense();
  return dense.transpose() * dense;
}

}  // namespace mscs
