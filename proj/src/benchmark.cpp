#include <atomic>
#include <chrono>
#include <cmath>
#include <exception>
#include <thread>

#include "mscs/error.hpp"
#include "mscs/eval.hpp"

namespace mscs {

double EpsilonRule::resolve(const Eigen::MatrixXd& measurements) const {
  if (!(value >= 0.0)) throw ParameterError("epsilon rule value must be non-negative");
  return kind == Kind::Absolute ? value : value * measurements.norm();
}

const SummaryCell& BenchmarkSummary::at(const std::string& method, Index m) const {
  for (const auto& cell : cells) {
    if (cell.method == method && cell.m == m) return cell;
  }
  throw DimensionError("no summary cell for " + method + " at m=" + std::to_string(m));
}

SignalSource simulated_block_source(const SimulatedSignalSpec& spec) {
  SignalSource source;
  source.description = "simulated " + to_string(spec.block_kind) + " blocks";
  source.rows = spec.n;
  source.columns = 1;
  source.draw = [spec](Index, std::uint64_t seed) {
    SimulatedSignalSpec s = spec;
    s.seed = seed;
    SimulatedSignal sig = simulate_signal(s);
    return TrialSignal{sig.clean, sig.noisy};
  };
  return source;
}

SignalSource section_source(std::vector<Eigen::VectorXd> sections, double snr) {
  if (sections.empty()) throw DimensionError("section source needs at least one section");
  const Index n = sections.front().size();
  for (const auto& s : sections) {
    if (s.size() != n) throw DimensionError("sections differ in length");
  }
  SignalSource source;
  source.description = std::to_string(sections.size()) + " ingested sections";
  source.rows = n;
  source.columns = 1;
  source.draw = [sections = std::move(sections), snr](Index trial, std::uint64_t seed) {
    const Eigen::VectorXd& clean = sections[static_cast<std::size_t>(trial) % sections.size()];
    return TrialSignal{clean, add_noise(clean, snr, derive_seed(seed, {2}))};
  };
  return source;
}

SignalSource image_source(std::vector<Eigen::MatrixXd> images) {
  if (images.empty()) throw DimensionError("image source needs at least one image");
  SignalSource source;
  source.description = std::to_string(images.size()) + " images";
  source.rows = images.front().rows();
  source.columns = images.front().cols();
  for (const auto& img : images) {
    if (img.rows() != source.rows || img.cols() != source.columns) {
      throw DimensionError("images differ in shape");
    }
  }
  source.draw = [images = std::move(images)](Index trial, std::uint64_t) {
    const Eigen::MatrixXd& img = images[static_cast<std::size_t>(trial) % images.size()];
    return TrialSignal{img, img};
  };
  return source;
}

Eigen::MatrixXd synthetic_low_rank_image(Index size, int rank, std::uint64_t seed) {
  if (size < 2 || rank < 1 || rank > size) throw DimensionError("bad synthetic image parameters");
  Rng rng(seed);
  auto draw_interval = [&](Index& lo, Index& hi) {
    // Intervals span between a quarter and three quarters of the side.
    const Index min_len = std::max<Index>(1, size / 4);
    const Index max_len = std::max<Index>(min_len, (3 * size) / 4);
    const Index len = min_len + static_cast<Index>(rng() % static_cast<std::uint64_t>(max_len - min_len + 1));
    lo = static_cast<Index>(rng() % static_cast<std::uint64_t>(size - len + 1));
    hi = lo + len;
  };
  // Rank-1 rectangles with distinct row and column supports keep the sum at the requested rank.
  for (int attempt = 0; attempt < 1000; ++attempt) {
    Eigen::MatrixXd image = Eigen::MatrixXd::Zero(size, size);
    for (int k = 0; k < rank; ++k) {
      Index r0, r1, c0, c1;
      draw_interval(r0, r1);
      draw_interval(c0, c1);
      const double amplitude = 0.5 + static_cast<double>(rng() % 1000) / 1000.0;
      image.block(r0, c0, r1 - r0, c1 - c0).array() += amplitude;
    }
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(image);
    const auto& s = svd.singularValues();
    Index numeric_rank = 0;
    while (numeric_rank < s.size() && s(numeric_rank) > 1e-9 * s(0)) ++numeric_rank;
    if (numeric_rank == rank) return image / image.maxCoeff();
  }
  throw DimensionError("could not draw an image of the requested rank");
}

SignalSource synthetic_image_source(Index size, int rank) {
  SignalSource source;
  source.description = "synthetic rank-" + std::to_string(rank) + " images";
  source.rows = size;
  source.columns = size;
  source.draw = [size, rank](Index, std::uint64_t seed) {
    Eigen::MatrixXd img = synthetic_low_rank_image(size, rank, seed);
    return TrialSignal{img, img};
  };
  return source;
}

std::uint64_t trial_signal_seed(std::uint64_t seed, int trial) {
  return derive_seed(seed, {1, static_cast<std::uint64_t>(trial)});
}

std::uint64_t trial_sensing_seed(std::uint64_t seed, Index m, int trial) {
  return derive_seed(seed, {2, static_cast<std::uint64_t>(m), static_cast<std::uint64_t>(trial)});
}

Eigen::MatrixXd recover_with(const MethodSpec& method, const Eigen::MatrixXd& measurements,
                             const Eigen::MatrixXd& sensing, const SolverConfig& config,
                             RecoveryResult* details) {
  const double eps = method.epsilon.resolve(measurements);
  RecoveryResult result;
  if (!method.preset) {
    result = least_squares_recover(measurements, sensing, eps);
  } else {
    PresetParams params = method.params;
    params.epsilon = eps;
    result = solve(make_preset(*method.preset, measurements, sensing, params), config);
  }
  Eigen::MatrixXd estimate = result.estimate;
  if (details) *details = std::move(result);
  return estimate;
}

BenchmarkReport run_benchmark(const BenchmarkSpec& spec) {
  if (spec.methods.empty()) throw ConfigError("benchmark needs at least one method");
  if (spec.m_values.empty()) throw ConfigError("benchmark needs at least one m value");
  if (spec.trials < 1) throw ConfigError("benchmark needs at least one trial");
  if (!spec.source.draw) throw ConfigError("benchmark needs a signal source");
  for (Index m : spec.m_values) {
    if (m < 1 || m > spec.source.rows) throw ConfigError("m values must lie in 1..N");
  }
  spec.solver.validate();

  const std::size_t methods = spec.methods.size();
  const std::size_t cells = spec.m_values.size() * static_cast<std::size_t>(spec.trials);
  // Layout: [method][m][trial].
  std::vector<TrialReport> trials(methods * cells);

  auto run_realization = [&](std::size_t job) {
    const std::size_t mi = job / static_cast<std::size_t>(spec.trials);
    const int c = static_cast<int>(job % static_cast<std::size_t>(spec.trials));
    const Index m = spec.m_values[mi];
    const TrialSignal signal = spec.source.draw(c, trial_signal_seed(spec.seed, c));
    const Eigen::MatrixXd phi =
        generate_matrix({spec.sensing, m, spec.source.rows, trial_sensing_seed(spec.seed, m, c)});
    const Eigen::MatrixXd y = sense(phi, signal.observed);
    for (std::size_t k = 0; k < methods; ++k) {
      const MethodSpec& method = spec.methods[k];
      TrialReport& report = trials[k * cells + job];
      report.method = method.name;
      report.m = m;
      report.trial_index = c;
      const auto start = std::chrono::steady_clock::now();
      Eigen::MatrixXd estimate;
      try {
        RecoveryResult details;
        estimate = recover_with(method, y, phi, spec.solver, &details);
        report.converged = details.converged;
        report.iterations = details.iterations;
      } catch (const std::exception& e) {
        estimate = Eigen::MatrixXd::Zero(signal.clean.rows(), signal.clean.cols());
        report.converged = false;
        report.failure = e.what();
      }
      report.wall_time =
          std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
      report.l1_error = trial_error(signal.clean, estimate, ErrorNorm::L1);
      report.l2_error = trial_error(signal.clean, estimate, ErrorNorm::L2);
    }
  };

  const int threads = std::max(1, spec.threads);
  if (threads == 1) {
    for (std::size_t job = 0; job < cells; ++job) run_realization(job);
  } else {
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::atomic<bool> failed{false};
    std::vector<std::thread> pool;
    for (int t = 0; t < threads; ++t) {
      pool.emplace_back([&] {
        for (std::size_t job = next++; job < cells; job = next++) {
          try {
            run_realization(job);
          } catch (...) {
            if (!failed.exchange(true)) failure = std::current_exception();
          }
        }
      });
    }
    for (auto& th : pool) th.join();
    if (failure) std::rethrow_exception(failure);
  }

  BenchmarkReport report;
  report.trials = std::move(trials);
  report.summary = summarize(report.trials);
  return report;
}

BenchmarkSummary summarize(const std::vector<TrialReport>& trials) {
  BenchmarkSummary summary;
  std::vector<std::vector<double>> l1;
  std::vector<std::vector<double>> l2;
  for (const auto& t : trials) {
    std::size_t idx = 0;
    while (idx < summary.cells.size() &&
           !(summary.cells[idx].method == t.method && summary.cells[idx].m == t.m)) {
      ++idx;
    }
    if (idx == summary.cells.size()) {
      summary.cells.push_back({t.method, t.m});
      l1.emplace_back();
      l2.emplace_back();
    }
    l1[idx].push_back(t.l1_error);
    l2[idx].push_back(t.l2_error);
    summary.cells[idx].trials += 1;
    summary.cells[idx].converged += t.converged ? 1 : 0;
  }
  for (std::size_t i = 0; i < summary.cells.size(); ++i) {
    SummaryCell& cell = summary.cells[i];
    cell.mean_l1 = sample_mean(l1[i]);
    cell.mean_l2 = sample_mean(l2[i]);
    cell.std_l1 = l1[i].size() > 1 ? sample_std(l1[i]) : 0.0;
    cell.std_l2 = l2[i].size() > 1 ? sample_std(l2[i]) : 0.0;
  }
  return summary;
}

}  // namespace mscs
