#include <cmath>
#include <limits>

#include "mscs/error.hpp"
#include "mscs/eval.hpp"

namespace mscs {

void CrossValidationConfig::validate() const {
  if (folds < 2) throw ConfigError("cross-validation needs at least two folds");
  if (grid.empty()) throw ConfigError("cross-validation grid is empty");
  for (const auto& [name, values] : grid) {
    if (values.empty()) throw ConfigError("grid for '" + name + "' is empty");
  }
  if (!(delta >= 0.0)) throw ConfigError("delta must be non-negative");
}

std::vector<ParameterPoint> expand_grid(
    const std::vector<std::pair<std::string, std::vector<double>>>& grid) {
  std::vector<ParameterPoint> points{ParameterPoint{}};
  for (const auto& [name, values] : grid) {
    std::vector<ParameterPoint> next;
    for (const auto& partial : points) {
      for (double v : values) {
        ParameterPoint p = partial;
        p[name] = v;
        next.push_back(std::move(p));
      }
    }
    points = std::move(next);
  }
  return points;
}

CrossValidationReport k_fold_tune(const std::vector<TuningSample>& groups,
                                  const ProblemTemplate& problem, const CrossValidationConfig& cv,
                                  const SolverConfig& solver) {
  cv.validate();
  if (static_cast<int>(groups.size()) != cv.folds) {
    throw ConfigError("cross-validation needs exactly one data group per fold");
  }

  CrossValidationReport report;
  report.points = expand_grid(cv.grid);
  const std::size_t group_count = groups.size();
  const std::size_t point_count = report.points.size();

  auto residual_at = [&](const TuningSample& sample, const ParameterPoint& params,
                         bool* converged) {
    const RecoveryResult r = solve(problem(sample, params), solver);
    if (converged) *converged = r.converged;
    return trial_error(sample.clean, r.estimate, ErrorNorm::L2);
  };

  report.residuals.assign(group_count, std::vector<double>(point_count));
  report.converged.assign(group_count, std::vector<char>(point_count));
  for (std::size_t g = 0; g < group_count; ++g) {
    for (std::size_t p = 0; p < point_count; ++p) {
      bool ok = false;
      report.residuals[g][p] = residual_at(groups[g], report.points[p], &ok);
      report.converged[g][p] = ok ? 1 : 0;
    }
  }

  for (std::size_t t = 0; t < group_count; ++t) {
    double best = std::numeric_limits<double>::infinity();
    std::size_t chosen = 0;
    for (std::size_t p = 0; p < point_count; ++p) {
      double total = 0.0;
      for (std::size_t g = 0; g < group_count; ++g) {
        if (g != t) total += report.residuals[g][p];
      }
      const double mean = total / static_cast<double>(group_count - 1);
      if (mean < best) {
        best = mean;
        chosen = p;
      }
    }
    report.folds.push_back({static_cast<int>(t), chosen, best, 0.0});
  }

  // Offsets from the first fold's choice keep the average exact when every
  // fold agrees.
  for (const auto& [name, values] : cv.grid) {
    const double base = report.points[report.folds.front().chosen_point].at(name);
    double offset = 0.0;
    for (const auto& fold : report.folds) offset += report.points[fold.chosen_point].at(name) - base;
    report.averaged[name] = base + offset / static_cast<double>(report.folds.size());
  }

  // Reuse the cached residuals when the averaged parameters land on a grid point.
  std::size_t averaged_index = point_count;
  for (std::size_t p = 0; p < point_count; ++p) {
    if (report.points[p] == report.averaged) averaged_index = p;
  }

  double training = 0.0;
  double testing = 0.0;
  for (auto& fold : report.folds) {
    const auto held_out = static_cast<std::size_t>(fold.held_out);
    fold.testing_residual = averaged_index < point_count
                                ? report.residuals[held_out][averaged_index]
                                : residual_at(groups[held_out], report.averaged, nullptr);
    training += fold.training_residual;
    testing += fold.testing_residual;
  }
  report.r_training = training / static_cast<double>(report.folds.size());
  report.r_testing = testing / static_cast<double>(report.folds.size());
  report.passed = std::fabs(report.r_testing - report.r_training) <= cv.delta * std::fabs(report.r_training);
  return report;
}

}  // namespace mscs
