#include <cmath>

#include "mscs/error.hpp"
#include "mscs/eval.hpp"

namespace mscs {
namespace {

std::vector<double> per_trial(const std::vector<Eigen::MatrixXd>& originals,
                              const std::vector<Eigen::MatrixXd>& estimates, ErrorNorm b) {
  if (originals.empty()) throw DimensionError("error metrics need at least one trial");
  if (originals.size() != estimates.size()) {
    throw DimensionError("originals and estimates differ in count");
  }
  std::vector<double> errors;
  errors.reserve(originals.size());
  for (std::size_t c = 0; c < originals.size(); ++c) {
    errors.push_back(trial_error(originals[c], estimates[c], b));
  }
  return errors;
}

}  // namespace

double trial_error(const Eigen::MatrixXd& original, const Eigen::MatrixXd& estimate, ErrorNorm b) {
  if (original.rows() != estimate.rows() || original.cols() != estimate.cols()) {
    throw DimensionError("original and estimate shapes differ");
  }
  const auto diff = (original - estimate).reshaped();
  return b == ErrorNorm::L1 ? diff.lpNorm<1>() : diff.norm();
}

double sample_mean(const std::vector<double>& values) {
  if (values.empty()) throw DimensionError("mean of an empty sample");
  double total = 0.0;
  for (double v : values) total += v;
  return total / static_cast<double>(values.size());
}

double sample_std(const std::vector<double>& values) {
  if (values.size() < 2) throw DimensionError("sample standard deviation needs at least two values");
  const double mean = sample_mean(values);
  double sq = 0.0;
  for (double v : values) sq += (v - mean) * (v - mean);
  return std::sqrt(sq / static_cast<double>(values.size() - 1));
}

double mean_error(const std::vector<Eigen::MatrixXd>& originals,
                  const std::vector<Eigen::MatrixXd>& estimates, ErrorNorm b) {
  return sample_mean(per_trial(originals, estimates, b));
}

double std_error(const std::vector<Eigen::MatrixXd>& originals,
                 const std::vector<Eigen::MatrixXd>& estimates, ErrorNorm b) {
  return sample_std(per_trial(originals, estimates, b));
}

}  // namespace mscs
