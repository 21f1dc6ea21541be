#pragma once

#include <Eigen/Dense>

#include <memory>
#include <string>
#include <vector>

namespace mscs {

using Index = Eigen::Index;

enum class DiffDirection { Forward, Backward, Stacked };

// Full keeps the trailing boundary rows that only see -x (forward) or
// +x (backward), giving a square operator. Truncated drops them.
enum class DiffBoundary { Full, Truncated };

enum class WaveletFamily { Haar, Db4, Db10 };

// Real and imaginary parts of a complex vector, kept as two real vectors so
// that every solver computation stays in real arithmetic.
struct ComplexStackedVector {
  Eigen::VectorXd real_part;
  Eigen::VectorXd imag_part;

  Index size() const { return real_part.size(); }
  // [real_part; imag_part]
  Eigen::VectorXd stacked() const;
  static ComplexStackedVector from_stacked(const Eigen::VectorXd& stacked);
};

// A linear analysis map Psi: R^N -> R^L with forward and adjoint application.
//
// Matrix inputs are processed column by column (Psi X). Instances are
// immutable and cheap to copy; copies share the underlying data.
//
// The DFT operator is real-stacked: for an N-point transform rows() == 2N, the
// first N outputs are real parts and the last N imaginary parts.
class AnalysisOperator {
 public:
  enum class Kind { Identity, ExplicitMatrix, Dft, Difference, Wavelet, BlockPartition };

  static AnalysisOperator identity(Index n);
  static AnalysisOperator explicit_matrix(Eigen::MatrixXd matrix);
  static AnalysisOperator dft(Index n);
  // Lag-`order` differences: forward rows are -x[r] + x[r+order].
  static AnalysisOperator difference(int order, DiffDirection direction, DiffBoundary boundary,
                                     Index n);
  // levels == 0 selects the full depth log2(n).
  static AnalysisOperator wavelet(WaveletFamily family, int levels, Index n);
  // Row selection that gathers x[blocks[0]], x[blocks[1]], ... in order.
  static AnalysisOperator block_partition(std::vector<std::vector<Index>> blocks, Index n);

  Kind kind() const;
  Index rows() const;
  Index cols() const;
  std::string describe() const;

  // True when Psi^T Psi = I exactly (identity, DFT, wavelet).
  bool is_orthonormal() const;

  Eigen::VectorXd apply(const Eigen::VectorXd& x) const;
  Eigen::MatrixXd apply_columns(const Eigen::MatrixXd& x) const;
  Eigen::VectorXd adjoint(const Eigen::VectorXd& u) const;
  Eigen::MatrixXd adjoint_columns(const Eigen::MatrixXd& u) const;

  // DFT only.
  ComplexStackedVector apply_complex(const Eigen::VectorXd& x) const;
  Eigen::VectorXd adjoint(const ComplexStackedVector& u) const;

  Eigen::MatrixXd to_dense() const;
  // Psi^T Psi.
  Eigen::MatrixXd gram() const;

  // Block index sets (BlockPartition only).
  const std::vector<std::vector<Index>>& blocks() const;

  struct Impl;

 private:
  explicit AnalysisOperator(std::shared_ptr<const Impl> impl);
  std::shared_ptr<const Impl> impl_;
};

std::string to_string(WaveletFamily family);
WaveletFamily wavelet_family_from_string(const std::string& name);

namespace detail {
// Orthonormal lowpass reconstruction filter for a family.
const std::vector<double>& wavelet_lowpass(WaveletFamily family);
void wavelet_forward(const std::vector<double>& lowpass, int levels, const double* in, double* out,
                     Index n);
void wavelet_inverse(const std::vector<double>& lowpass, int levels, const double* in, double* out,
                     Index n);
}  // namespace detail

}  // namespace mscs
