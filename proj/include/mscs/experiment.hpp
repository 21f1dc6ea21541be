#pragma once

#include <Eigen/Dense>

#include <json.hpp>

#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "mscs/eval.hpp"

namespace mscs {

enum class ExperimentKind { Simulate, Recover, Benchmark, Tune };
enum class OutputFormat { Csv, Json };

std::string to_string(ExperimentKind kind);
ExperimentKind experiment_kind_from_string(const std::string& name);

// ---- signal ingestion -------------------------------------------------------

enum class IngestLayout { SingleColumn, MultiColumnMatrix };

struct IngestResult {
  std::vector<Eigen::VectorXd> sections;  // SingleColumn: unit-L2 sections
  Eigen::MatrixXd matrix;                 // MultiColumnMatrix: divided by its max |entry|
  std::vector<std::string> warnings;
};

// SingleColumn reads `column` of the file and splits it into sections of
// `section_length` samples (the whole column when absent); a trailing partial
// section is dropped with a warning.
IngestResult ingest_signal(const std::string& path, IngestLayout layout,
                           std::optional<Index> section_length = std::nullopt, int column = 0);

// ---- configuration ----------------------------------------------------------

// Every field resolved; produced by parse_config. The JSON schema is
// documented in README.md.
struct ExperimentConfig {
  ExperimentKind kind = ExperimentKind::Benchmark;
  std::uint64_t seed = 0;
  nlohmann::json signal;   // normalized signal-source description
  SensingKind sensing = SensingKind::Gaussian;
  nlohmann::json methods;  // normalized method list
  std::vector<Index> m_values;
  int trials = 1;
  SolverConfig solver;
  int threads = 1;
  std::string out_dir = "results";
  OutputFormat format = OutputFormat::Csv;
  bool emit_timing = false;
  nlohmann::json tune;     // normalized tuning block (Tune only)

  // The part of the configuration that determines the results: everything
  // except output location, format and thread count.
  nlohmann::json embedded() const;
};

// Accepts a config document, or a results artifact that embeds one (JSON with
// a "config" key, or CSV whose first line is "# config: {...}").
nlohmann::json load_config_document(const std::string& path);
ExperimentConfig parse_config(const nlohmann::json& doc);

// Built from the normalized config.
SignalSource build_source(const ExperimentConfig& config);
std::vector<MethodSpec> build_methods(const ExperimentConfig& config, Index n, Index columns);

// ---- execution and output -----------------------------------------------------

struct RunOutcome {
  int exit_status = 0;
  std::vector<std::string> artifacts;  // written paths
  std::vector<std::string> messages;   // one-line summaries and warnings
};

RunOutcome run(const ExperimentConfig& config, std::ostream& log);

// CSV table (method, m, mean_l1, mean_l2, std_l1, std_l2, C) preceded by a
// "# config: ..." line.
std::string summary_csv(const BenchmarkSummary& summary, const nlohmann::json& embedded);
std::string trials_csv(const std::vector<TrialReport>& trials, const nlohmann::json& embedded,
                       bool emit_timing);
nlohmann::json benchmark_json(const BenchmarkReport& report, const nlohmann::json& embedded,
                              bool emit_timing);

// Writes via a temporary file and rename.
void write_atomically(const std::string& path, const std::string& contents);

}  // namespace mscs
