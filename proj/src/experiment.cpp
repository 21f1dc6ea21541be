#include <cstdio>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <sstream>

#include "mscs/csv.hpp"
#include "mscs/error.hpp"
#include "mscs/experiment.hpp"

namespace mscs {

using nlohmann::json;

namespace {

const json& require_field(const json& obj, const char* key, const std::string& where) {
  if (!obj.is_object() || !obj.contains(key)) {
    throw ConfigError(where + ": missing field '" + key + "'");
  }
  return obj.at(key);
}

template <typename T>
T get_or(const json& obj, const char* key, T fallback, const std::string& where) {
  if (!obj.is_object() || !obj.contains(key) || obj.at(key).is_null()) return fallback;
  try {
    return obj.at(key).get<T>();
  } catch (const json::exception&) {
    throw ConfigError(where + ": field '" + key + "' has the wrong type");
  }
}

std::string snr_text(const json& value, const std::string& where) {
  std::string text;
  if (value.is_number()) {
    text = csv::format_number(value.get<double>());
  } else if (value.is_string()) {
    text = value.get<std::string>();
  } else {
    throw ConfigError(where + ": snr must be a number or a string such as \"7dB\"");
  }
  parse_snr(text);  // validates
  return text;
}

DiffDirection direction_from_string(const std::string& s) {
  if (s == "forward") return DiffDirection::Forward;
  if (s == "backward") return DiffDirection::Backward;
  if (s == "stacked") return DiffDirection::Stacked;
  throw ConfigError("unknown difference direction: " + s);
}

DiffBoundary boundary_from_string(const std::string& s) {
  if (s == "truncated") return DiffBoundary::Truncated;
  if (s == "full") return DiffBoundary::Full;
  throw ConfigError("unknown difference boundary: " + s);
}

json normalize_tv(const json& tv, const std::string& where) {
  json out;
  out["order"] = get_or<int>(tv, "order", 1, where);
  out["direction"] = get_or<std::string>(tv, "direction", "forward", where);
  out["boundary"] = get_or<std::string>(tv, "boundary", "truncated", where);
  direction_from_string(out["direction"]);
  boundary_from_string(out["boundary"]);
  if (out["order"].get<int>() < 1) throw ConfigError(where + ": tv.order must be >= 1");
  return out;
}

json normalize_dictionary(const json& dict, const std::string& default_kind, const json& tv,
                          const std::string& where) {
  json out;
  const std::string kind = get_or<std::string>(dict, "kind", default_kind, where);
  out["kind"] = kind;
  if (kind == "identity" || kind == "dft") {
  } else if (kind == "wavelet") {
    out["family"] = get_or<std::string>(dict, "family", "db4", where);
    out["levels"] = get_or<int>(dict, "levels", 0, where);
    wavelet_family_from_string(out["family"]);
  } else if (kind == "difference") {
    const json merged = dict.is_object() && dict.contains("order") ? dict : tv;
    const json t = normalize_tv(merged, where);
    out.update(t);
  } else {
    throw ConfigError(where + ": unknown dictionary kind '" + kind + "'");
  }
  return out;
}

json normalize_method(const json& m, std::size_t index) {
  const std::string where = "methods[" + std::to_string(index) + "]";
  if (!m.is_object()) throw ConfigError(where + " must be an object");
  json out;
  const std::string preset_name = require_field(m, "preset", where).get<std::string>();
  const bool ls = preset_name == "LS" || preset_name == "ls";
  std::optional<Preset> preset;
  if (!ls) {
    try {
      preset = preset_from_string(preset_name);
    } catch (const ParameterError& e) {
      throw ConfigError(where + ": " + e.what());
    }
  }
  out["preset"] = ls ? "LS" : to_string(*preset);
  out["name"] = get_or<std::string>(m, "name", out["preset"].get<std::string>(), where);

  json eps;
  if (m.contains("epsilon") && m.at("epsilon").is_number()) {
    eps = {{"rule", "absolute"}, {"value", m.at("epsilon").get<double>()}};
  } else {
    const json e = m.contains("epsilon") ? m.at("epsilon") : json::object();
    eps["rule"] = get_or<std::string>(e, "rule", "absolute", where + ".epsilon");
    eps["value"] = get_or<double>(e, "value", 0.0, where + ".epsilon");
    if (eps["rule"] != "absolute" && eps["rule"] != "relative") {
      throw ConfigError(where + ".epsilon: rule must be 'absolute' or 'relative'");
    }
  }
  if (!(eps["value"].get<double>() >= 0.0)) throw ConfigError(where + ".epsilon: value must be >= 0");
  out["epsilon"] = eps;

  out["tv"] = normalize_tv(m.contains("tv") ? m.at("tv") : json::object(), where + ".tv");
  if (!ls) {
    const std::string default_dict = *preset == Preset::L1Nuclear ? "difference" : "identity";
    out["dictionary"] = normalize_dictionary(m.contains("dictionary") ? m.at("dictionary") : json::object(),
                                             default_dict, out["tv"], where + ".dictionary");
  }
  for (const char* key : {"lambda2", "tv_mix"}) {
    if (m.contains(key) && !m.at(key).is_null()) {
      if (!m.at(key).is_number() || m.at(key).get<double>() < 0.0) {
        throw ConfigError(where + ": '" + key + "' must be a non-negative number");
      }
      out[key] = m.at(key).get<double>();
    }
  }
  if (m.contains("groups")) {
    const json& g = m.at("groups");
    if (g.is_string()) {
      const std::string s = g.get<std::string>();
      if (s != "whole" && s != "singletons" && s != "pairs") {
        throw ConfigError(where + ".groups: expected 'whole', 'singletons', 'pairs' or {\"width\": w}");
      }
      out["groups"] = s;
    } else if (g.is_object() && g.contains("width") && g.at("width").is_number_integer() &&
               g.at("width").get<int>() >= 1) {
      out["groups"] = {{"width", g.at("width").get<int>()}};
    } else {
      throw ConfigError(where + ".groups: expected 'whole', 'singletons', 'pairs' or {\"width\": w}");
    }
  }
  const bool needs_groups = preset && (*preset == Preset::L2L1 || *preset == Preset::L2L1TV);
  if (needs_groups && !out.contains("groups")) throw ConfigError(where + ": preset needs 'groups'");
  const bool needs_lambda = preset && (*preset == Preset::L1TV || *preset == Preset::L2L1TV ||
                                       *preset == Preset::L1L1 || *preset == Preset::L1Nuclear ||
                                       *preset == Preset::L1TV1TV2);
  if (needs_lambda && !out.contains("lambda2")) throw ConfigError(where + ": preset needs 'lambda2'");
  if (preset && *preset == Preset::L1TV1TV2 && !out.contains("tv_mix")) {
    throw ConfigError(where + ": preset needs 'tv_mix'");
  }
  return out;
}

json normalize_signal(const json& s) {
  const std::string where = "signal";
  json out;
  const std::string source = require_field(s, "source", where).get<std::string>();
  out["source"] = source;
  if (source == "simulated") {
    out["n"] = get_or<Index>(s, "n", 500, where);
    out["block_width"] = get_or<Index>(s, "block_width", 50, where);
    out["block_kind"] = get_or<std::string>(s, "block_kind", "rectangle", where);
    out["snr"] = snr_text(s.contains("snr") ? s.at("snr") : json("inf"), where);
    block_kind_from_string(out["block_kind"]);
    if (out["n"].get<Index>() < 2) throw ConfigError("signal.n must be >= 2");
    if (out["block_width"].get<Index>() < 1 || out["block_width"].get<Index>() > out["n"].get<Index>()) {
      throw ConfigError("signal.block_width must lie in 1..n");
    }
  } else if (source == "file") {
    out["path"] = require_field(s, "path", where).get<std::string>();
    out["layout"] = get_or<std::string>(s, "layout", "single_column", where);
    if (out["layout"] != "single_column") {
      throw ConfigError("signal.layout for 'file' must be single_column; use image_files for matrices");
    }
    if (s.contains("section_length") && !s.at("section_length").is_null()) {
      out["section_length"] = s.at("section_length").get<Index>();
    }
    out["column"] = get_or<int>(s, "column", 0, where);
    out["snr"] = snr_text(s.contains("snr") ? s.at("snr") : json("inf"), where);
  } else if (source == "image_files") {
    const json& paths = require_field(s, "paths", where);
    if (!paths.is_array() || paths.empty()) throw ConfigError("signal.paths must be a non-empty list");
    out["paths"] = paths;
  } else if (source == "synthetic_image") {
    out["size"] = get_or<Index>(s, "size", 32, where);
    out["rank"] = get_or<int>(s, "rank", 3, where);
  } else {
    throw ConfigError("signal.source must be simulated, file, image_files or synthetic_image");
  }
  return out;
}

AnalysisOperator build_dictionary(const json& d, Index n) {
  const std::string kind = d.at("kind");
  if (kind == "identity") return AnalysisOperator::identity(n);
  if (kind == "dft") return AnalysisOperator::dft(n);
  if (kind == "wavelet") {
    return AnalysisOperator::wavelet(wavelet_family_from_string(d.at("family")), d.at("levels").get<int>(), n);
  }
  return AnalysisOperator::difference(d.at("order").get<int>(), direction_from_string(d.at("direction")),
                                      boundary_from_string(d.at("boundary")), n);
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

std::string config_comment(const json& embedded) { return "# config: " + embedded.dump() + "\n"; }

std::string join_path(const std::string& dir, const std::string& file) {
  return (std::filesystem::path(dir) / file).string();
}

}  // namespace

std::string to_string(ExperimentKind kind) {
  switch (kind) {
    case ExperimentKind::Simulate: return "simulate";
    case ExperimentKind::Recover: return "recover";
    case ExperimentKind::Benchmark: return "benchmark";
    case ExperimentKind::Tune: return "tune";
  }
  return "unknown";
}

ExperimentKind experiment_kind_from_string(const std::string& name) {
  if (name == "simulate" || name == "simulate_blocks") return ExperimentKind::Simulate;
  if (name == "recover" || name == "recover_file") return ExperimentKind::Recover;
  if (name == "benchmark") return ExperimentKind::Benchmark;
  if (name == "tune") return ExperimentKind::Tune;
  throw ConfigError("experiment must be simulate, recover, benchmark or tune");
}

IngestResult ingest_signal(const std::string& path, IngestLayout layout,
                           std::optional<Index> section_length, int column) {
  const csv::Table table = csv::read_numeric(path);
  IngestResult result;
  if (layout == IngestLayout::MultiColumnMatrix) {
    const std::size_t cols = table.rows.front().size();
    Eigen::MatrixXd m(static_cast<Index>(table.rows.size()), static_cast<Index>(cols));
    for (std::size_t r = 0; r < table.rows.size(); ++r) {
      if (table.rows[r].size() != cols) throw ConfigError(path + ": ragged matrix rows");
      for (std::size_t c = 0; c < cols; ++c) m(static_cast<Index>(r), static_cast<Index>(c)) = table.rows[r][c];
    }
    const double peak = m.cwiseAbs().maxCoeff();
    if (peak == 0.0) throw ConfigError(path + ": matrix is all zeros");
    result.matrix = m / peak;
    return result;
  }

  std::vector<double> samples;
  for (const auto& row : table.rows) {
    if (column < 0 || static_cast<std::size_t>(column) >= row.size()) {
      throw ConfigError(path + ": column " + std::to_string(column) + " missing");
    }
    samples.push_back(row[static_cast<std::size_t>(column)]);
  }
  const Index total = static_cast<Index>(samples.size());
  const Index len = section_length.value_or(total);
  if (len < 1) throw ConfigError("section length must be positive");
  if (len > total) throw ConfigError(path + ": fewer samples than one section");
  const Index count = total / len;
  if (count * len != total) {
    result.warnings.push_back(path + ": dropped " + std::to_string(total - count * len) +
                              " trailing samples that do not fill a section");
  }
  for (Index s = 0; s < count; ++s) {
    Eigen::VectorXd section = Eigen::Map<const Eigen::VectorXd>(samples.data() + s * len, len);
    const double norm = section.norm();
    if (norm == 0.0) {
      result.warnings.push_back(path + ": section " + std::to_string(s) + " is all zeros; left unnormalized");
    } else {
      section /= norm;
    }
    result.sections.push_back(std::move(section));
  }
  return result;
}

json ExperimentConfig::embedded() const {
  json j;
  j["experiment"] = to_string(kind);
  j["seed"] = seed;
  j["signal"] = signal;
  j["sensing"] = to_string(sensing);
  j["methods"] = methods;
  j["m_values"] = m_values;
  j["trials"] = trials;
  j["solver"] = {{"max_iterations", solver.max_iterations},
                 {"abs_tolerance", solver.abs_tolerance},
                 {"rel_tolerance", solver.rel_tolerance},
                 {"penalty", solver.penalty},
                 {"penalty_adaptation", solver.penalty_adaptation}};
  j["emit_timing"] = emit_timing;
  if (kind == ExperimentKind::Tune) j["tune"] = tune;
  return j;
}

json load_config_document(const std::string& path) {
  const std::string text = read_file(path);
  const std::string marker = "# config: ";
  if (text.rfind(marker, 0) == 0) {
    const auto end = text.find('\n');
    return json::parse(text.substr(marker.size(), end - marker.size()));
  }
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(path + ": " + e.what());
  }
  if (doc.is_object() && !doc.contains("experiment") && doc.contains("config")) return doc.at("config");
  return doc;
}

ExperimentConfig parse_config(const json& doc) {
  if (!doc.is_object()) throw ConfigError("config must be a JSON object");
  ExperimentConfig c;
  try {
    c.kind = experiment_kind_from_string(require_field(doc, "experiment", "config").get<std::string>());
    c.seed = get_or<std::uint64_t>(doc, "seed", 0, "config");
    c.signal = normalize_signal(require_field(doc, "signal", "config"));
    c.sensing = sensing_kind_from_string(get_or<std::string>(doc, "sensing", "gaussian", "config"));
    c.trials = get_or<int>(doc, "trials", 1, "config");
    if (c.trials < 1) throw ConfigError("trials must be >= 1");
    c.threads = get_or<int>(doc, "threads", 1, "config");
    if (c.threads < 1) throw ConfigError("threads must be >= 1");
    c.emit_timing = get_or<bool>(doc, "emit_timing", false, "config");

    const json solver = doc.contains("solver") ? doc.at("solver") : json::object();
    c.solver.max_iterations = get_or<int>(solver, "max_iterations", 2000, "solver");
    c.solver.abs_tolerance = get_or<double>(solver, "abs_tolerance", 1e-6, "solver");
    c.solver.rel_tolerance = get_or<double>(solver, "rel_tolerance", 1e-4, "solver");
    c.solver.penalty = get_or<double>(solver, "penalty", 1.0, "solver");
    c.solver.penalty_adaptation = get_or<bool>(solver, "penalty_adaptation", true, "solver");
    try {
      c.solver.validate();
    } catch (const ParameterError& e) {
      throw ConfigError(std::string("solver: ") + e.what());
    }

    const json output = doc.contains("output") ? doc.at("output") : json::object();
    c.out_dir = get_or<std::string>(output, "dir", "results", "output");
    const std::string fmt = get_or<std::string>(output, "format", "csv", "output");
    if (fmt == "csv") c.format = OutputFormat::Csv;
    else if (fmt == "json") c.format = OutputFormat::Json;
    else throw ConfigError("output.format must be csv or json");

    if (c.kind != ExperimentKind::Simulate) {
      const json& methods = require_field(doc, "methods", "config");
      if (!methods.is_array() || methods.empty()) throw ConfigError("methods must be a non-empty list");
      c.methods = json::array();
      for (std::size_t i = 0; i < methods.size(); ++i) c.methods.push_back(normalize_method(methods[i], i));
    } else {
      c.methods = json::array();
    }

    if (c.kind == ExperimentKind::Tune) {
      const json& t = require_field(doc, "tune", "config");
      json tune;
      tune["method"] = get_or<std::string>(t, "method", c.methods[0]["name"].get<std::string>(), "tune");
      bool found = false;
      for (const auto& m : c.methods) found = found || m["name"] == tune["method"];
      if (!found) throw ConfigError("tune.method does not name a configured method");
      tune["folds"] = get_or<int>(t, "folds", 10, "tune");
      tune["delta"] = get_or<double>(t, "delta", 0.2, "tune");
      tune["m"] = require_field(t, "m", "tune").get<Index>();
      const json& grid = require_field(t, "grid", "tune");
      if (!grid.is_object() || grid.empty()) throw ConfigError("tune.grid must map parameter names to lists");
      for (const auto& [name, values] : grid.items()) {
        if (name != "lambda2" && name != "tv_mix") throw ConfigError("tune.grid: unknown parameter " + name);
        if (!values.is_array() || values.empty()) throw ConfigError("tune.grid." + name + " must be a non-empty list");
      }
      tune["grid"] = grid;
      c.tune = tune;
      c.m_values = {tune["m"].get<Index>()};
    } else if (c.kind != ExperimentKind::Simulate) {
      const json& ms = require_field(doc, "m_values", "config");
      if (!ms.is_array() || ms.empty()) throw ConfigError("m_values must be a non-empty list");
      c.m_values = ms.get<std::vector<Index>>();
    }
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
  return c;
}

SignalSource build_source(const ExperimentConfig& config) {
  const json& s = config.signal;
  const std::string source = s.at("source");
  if (source == "simulated") {
    SimulatedSignalSpec spec;
    spec.n = s.at("n").get<Index>();
    spec.block_width = s.at("block_width").get<Index>();
    spec.block_kind = block_kind_from_string(s.at("block_kind"));
    spec.snr = parse_snr(s.at("snr"));
    return simulated_block_source(spec);
  }
  if (source == "file") {
    std::optional<Index> len;
    if (s.contains("section_length")) len = s.at("section_length").get<Index>();
    IngestResult in = ingest_signal(s.at("path"), IngestLayout::SingleColumn, len, s.at("column").get<int>());
    return section_source(std::move(in.sections), parse_snr(s.at("snr")));
  }
  if (source == "image_files") {
    std::vector<Eigen::MatrixXd> images;
    for (const auto& p : s.at("paths")) {
      images.push_back(ingest_signal(p.get<std::string>(), IngestLayout::MultiColumnMatrix).matrix);
    }
    return image_source(std::move(images));
  }
  return synthetic_image_source(s.at("size").get<Index>(), s.at("rank").get<int>());
}

std::vector<MethodSpec> build_methods(const ExperimentConfig& config, Index n, Index columns) {
  std::vector<MethodSpec> out;
  for (const auto& m : config.methods) {
    MethodSpec spec;
    spec.name = m.at("name");
    const json& eps = m.at("epsilon");
    spec.epsilon.kind = eps.at("rule") == "relative" ? EpsilonRule::Kind::Relative : EpsilonRule::Kind::Absolute;
    spec.epsilon.value = eps.at("value").get<double>();
    if (m.at("preset") != "LS") {
      spec.preset = preset_from_string(m.at("preset"));
      PresetParams& p = spec.params;
      const json& tv = m.at("tv");
      p.tv.order = tv.at("order").get<int>();
      p.tv.direction = direction_from_string(tv.at("direction"));
      p.tv.boundary = boundary_from_string(tv.at("boundary"));
      p.dictionary = build_dictionary(m.at("dictionary"), n);
      if (m.contains("lambda2")) p.lambda2 = m.at("lambda2").get<double>();
      if (m.contains("tv_mix")) p.tv_mix = m.at("tv_mix").get<double>();
      if (m.contains("groups")) {
        const Index len = p.dictionary->rows() * columns;
        const json& g = m.at("groups");
        if (g.is_string()) {
          if (g == "whole") p.groups = GroupStructure::whole(len);
          else if (g == "singletons") p.groups = GroupStructure::singletons(len);
          else p.groups = GroupStructure::paired_halves(len);
        } else {
          p.groups = GroupStructure::contiguous(len, g.at("width").get<Index>());
        }
      }
    }
    out.push_back(std::move(spec));
  }
  return out;
}

void write_atomically(const std::string& path, const std::string& contents) {
  const std::filesystem::path target(path);
  if (target.has_parent_path()) std::filesystem::create_directories(target.parent_path());
  const std::filesystem::path tmp = target.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + tmp.string());
    out << contents;
    if (!out) throw std::runtime_error("write failed for " + tmp.string());
  }
  std::filesystem::rename(tmp, target);
}

std::string summary_csv(const BenchmarkSummary& summary, const json& embedded) {
  std::ostringstream os;
  os << config_comment(embedded);
  os << "method,m,mean_l1,mean_l2,std_l1,std_l2,C\n";
  for (const auto& c : summary.cells) {
    os << c.method << ',' << c.m << ',' << csv::format_number(c.mean_l1) << ','
       << csv::format_number(c.mean_l2) << ',' << csv::format_number(c.std_l1) << ','
       << csv::format_number(c.std_l2) << ',' << c.trials << '\n';
  }
  return os.str();
}

std::string trials_csv(const std::vector<TrialReport>& trials, const json& embedded, bool emit_timing) {
  std::ostringstream os;
  os << config_comment(embedded);
  os << "method,m,trial,l1_error,l2_error,converged,iterations" << (emit_timing ? ",wall_time" : "")
     << '\n';
  for (const auto& t : trials) {
    os << t.method << ',' << t.m << ',' << t.trial_index << ',' << csv::format_number(t.l1_error)
       << ',' << csv::format_number(t.l2_error) << ',' << (t.converged ? 1 : 0) << ','
       << t.iterations;
    if (emit_timing) os << ',' << csv::format_number(t.wall_time);
    os << '\n';
  }
  return os.str();
}

json benchmark_json(const BenchmarkReport& report, const json& embedded, bool emit_timing) {
  json j;
  j["config"] = embedded;
  j["summary"] = json::array();
  for (const auto& c : report.summary.cells) {
    j["summary"].push_back({{"method", c.method}, {"m", c.m}, {"mean_l1", c.mean_l1},
                            {"mean_l2", c.mean_l2}, {"std_l1", c.std_l1}, {"std_l2", c.std_l2},
                            {"C", c.trials}});
  }
  j["trials"] = json::array();
  for (const auto& t : report.trials) {
    json row = {{"method", t.method},     {"m", t.m},
                {"trial", t.trial_index}, {"l1_error", t.l1_error},
                {"l2_error", t.l2_error}, {"converged", t.converged},
                {"iterations", t.iterations}};
    if (!t.failure.empty()) row["failure"] = t.failure;
    if (emit_timing) row["wall_time"] = t.wall_time;
    j["trials"].push_back(std::move(row));
  }
  return j;
}

namespace {

void log_summary(const BenchmarkSummary& summary, std::ostream& log, RunOutcome& outcome) {
  for (const auto& c : summary.cells) {
    std::ostringstream line;
    line << c.method << " m=" << c.m << " mean_l1=" << csv::format_number(c.mean_l1)
         << " mean_l2=" << csv::format_number(c.mean_l2) << " converged=" << c.converged << "/"
         << c.trials;
    log << line.str() << '\n';
    outcome.messages.push_back(line.str());
  }
}

BenchmarkSpec benchmark_spec(const ExperimentConfig& config, SignalSource source) {
  BenchmarkSpec spec;
  spec.methods = build_methods(config, source.rows, source.columns);
  spec.m_values = config.m_values;
  spec.source = std::move(source);
  spec.sensing = config.sensing;
  spec.trials = config.trials;
  spec.seed = config.seed;
  spec.solver = config.solver;
  spec.threads = config.threads;
  return spec;
}

void write(const std::string& path, const std::string& contents, RunOutcome& outcome) {
  write_atomically(path, contents);
  outcome.artifacts.push_back(path);
}

RunOutcome run_simulate(const ExperimentConfig& config, const SignalSource& source) {
  RunOutcome outcome;
  const json embedded = config.embedded();
  std::ostringstream csv_out;
  json doc;
  doc["config"] = embedded;
  doc["signals"] = json::array();
  csv_out << config_comment(embedded) << "trial,index,clean,observed\n";
  for (int c = 0; c < config.trials; ++c) {
    const TrialSignal sig = source.draw(c, trial_signal_seed(config.seed, c));
    const auto clean = sig.clean.reshaped();
    const auto observed = sig.observed.reshaped();
    for (Index i = 0; i < clean.size(); ++i) {
      csv_out << c << ',' << i << ',' << csv::format_number(clean(i)) << ','
              << csv::format_number(observed(i)) << '\n';
    }
    doc["signals"].push_back({{"trial", c},
                              {"rows", sig.clean.rows()},
                              {"cols", sig.clean.cols()},
                              {"clean", std::vector<double>(clean.begin(), clean.end())},
                              {"observed", std::vector<double>(observed.begin(), observed.end())}});
  }
  if (config.format == OutputFormat::Csv) {
    write(join_path(config.out_dir, "signals.csv"), csv_out.str(), outcome);
  } else {
    write(join_path(config.out_dir, "signals.json"), doc.dump(2) + "\n", outcome);
  }
  outcome.messages.push_back("simulated " + std::to_string(config.trials) + " signal(s)");
  return outcome;
}

RunOutcome run_benchmark_or_recover(const ExperimentConfig& config, SignalSource source,
                                    std::ostream& log) {
  RunOutcome outcome;
  const json embedded = config.embedded();
  BenchmarkSpec spec = benchmark_spec(config, std::move(source));
  const bool recover = config.kind == ExperimentKind::Recover;

  struct EstimateRow {
    std::string method;
    Index m;
    int trial;
    Eigen::VectorXd original;
    Eigen::VectorXd estimate;
  };
  std::vector<EstimateRow> estimates;
  BenchmarkReport report;
  if (recover) {
    // Sequential so the estimate log keeps the (m, trial, method) order.
    for (Index m : spec.m_values) {
      for (int c = 0; c < spec.trials; ++c) {
        const TrialSignal sig = spec.source.draw(c, trial_signal_seed(spec.seed, c));
        const Eigen::MatrixXd phi =
            generate_matrix({spec.sensing, m, spec.source.rows, trial_sensing_seed(spec.seed, m, c)});
        const Eigen::MatrixXd y = sense(phi, sig.observed);
        for (const auto& method : spec.methods) {
          TrialReport t;
          t.method = method.name;
          t.m = m;
          t.trial_index = c;
          Eigen::MatrixXd est;
          try {
            RecoveryResult details;
            est = recover_with(method, y, phi, spec.solver, &details);
            t.converged = details.converged;
            t.iterations = details.iterations;
          } catch (const std::exception& e) {
            est = Eigen::MatrixXd::Zero(sig.clean.rows(), sig.clean.cols());
            t.failure = e.what();
          }
          t.l1_error = trial_error(sig.clean, est, ErrorNorm::L1);
          t.l2_error = trial_error(sig.clean, est, ErrorNorm::L2);
          report.trials.push_back(t);
          estimates.push_back({method.name, m, c, sig.clean.reshaped(), est.reshaped()});
        }
      }
    }
    report.summary = summarize(report.trials);
  } else {
    report = run_benchmark(spec);
  }

  for (const auto& t : report.trials) {
    if (!t.failure.empty()) {
      log << "warning: " << t.method << " m=" << t.m << " trial=" << t.trial_index
          << " failed: " << t.failure << '\n';
    }
  }
  log_summary(report.summary, log, outcome);

  if (config.format == OutputFormat::Csv) {
    write(join_path(config.out_dir, "summary.csv"), summary_csv(report.summary, embedded), outcome);
    write(join_path(config.out_dir, "trials.csv"), trials_csv(report.trials, embedded, config.emit_timing),
          outcome);
    if (recover) {
      std::ostringstream os;
      os << config_comment(embedded) << "method,m,trial,index,original,estimate\n";
      for (const auto& e : estimates) {
        for (Index i = 0; i < e.original.size(); ++i) {
          os << e.method << ',' << e.m << ',' << e.trial << ',' << i << ','
             << csv::format_number(e.original(i)) << ',' << csv::format_number(e.estimate(i)) << '\n';
        }
      }
      write(join_path(config.out_dir, "estimates.csv"), os.str(), outcome);
    }
  } else {
    json doc = benchmark_json(report, embedded, config.emit_timing);
    if (recover) {
      doc["estimates"] = json::array();
      for (const auto& e : estimates) {
        doc["estimates"].push_back(
            {{"method", e.method}, {"m", e.m}, {"trial", e.trial},
             {"original", std::vector<double>(e.original.begin(), e.original.end())},
             {"estimate", std::vector<double>(e.estimate.begin(), e.estimate.end())}});
      }
    }
    write(join_path(config.out_dir, recover ? "recovery.json" : "results.json"), doc.dump(2) + "\n",
          outcome);
  }
  return outcome;
}

RunOutcome run_tune(const ExperimentConfig& config, SignalSource source, std::ostream& log) {
  RunOutcome outcome;
  const json embedded = config.embedded();
  const json& t = config.tune;
  const std::vector<MethodSpec> methods = build_methods(config, source.rows, source.columns);
  const MethodSpec* method = nullptr;
  for (const auto& m : methods) {
    if (m.name == t.at("method").get<std::string>()) method = &m;
  }
  if (!method->preset) throw ConfigError("tune.method must be a regularized preset, not LS");

  CrossValidationConfig cv;
  cv.folds = t.at("folds").get<int>();
  cv.delta = t.at("delta").get<double>();
  cv.seed = config.seed;
  for (const auto& [name, values] : t.at("grid").items()) cv.grid.emplace_back(name, values.get<std::vector<double>>());

  const Index m = t.at("m").get<Index>();
  if (m < 1 || m > source.rows) throw ConfigError("tune.m must lie in 1..N");
  std::vector<TuningSample> groups;
  for (int g = 0; g < cv.folds; ++g) {
    const TrialSignal sig = source.draw(g, trial_signal_seed(config.seed, g));
    Eigen::MatrixXd phi = generate_matrix({config.sensing, m, source.rows, trial_sensing_seed(config.seed, m, g)});
    groups.push_back({sig.clean, sense(phi, sig.observed), std::move(phi)});
  }
  const MethodSpec base = *method;
  ProblemTemplate problem = [&base](const TuningSample& sample, const ParameterPoint& point) {
    PresetParams params = base.params;
    if (auto it = point.find("lambda2"); it != point.end()) params.lambda2 = it->second;
    if (auto it = point.find("tv_mix"); it != point.end()) params.tv_mix = it->second;
    params.epsilon = base.epsilon.resolve(sample.measurements);
    return make_preset(*base.preset, sample.measurements, sample.sensing, params);
  };
  const CrossValidationReport report = k_fold_tune(groups, problem, cv, config.solver);

  std::ostringstream line;
  line << base.name << " m=" << m;
  for (const auto& [name, value] : report.averaged) line << ' ' << name << "_bar=" << csv::format_number(value);
  line << " r_training=" << csv::format_number(report.r_training)
       << " r_testing=" << csv::format_number(report.r_testing) << " delta_test="
       << (report.passed ? "pass" : "fail");
  log << line.str() << '\n';
  outcome.messages.push_back(line.str());

  if (config.format == OutputFormat::Csv) {
    std::ostringstream folds;
    folds << config_comment(embedded) << "held_out";
    for (const auto& [name, values] : cv.grid) folds << ',' << name;
    folds << ",training_residual,testing_residual\n";
    for (const auto& f : report.folds) {
      folds << f.held_out;
      for (const auto& [name, values] : cv.grid) {
        folds << ',' << csv::format_number(report.points[f.chosen_point].at(name));
      }
      folds << ',' << csv::format_number(f.training_residual) << ','
            << csv::format_number(f.testing_residual) << '\n';
    }
    write(join_path(config.out_dir, "tune_folds.csv"), folds.str(), outcome);
    std::ostringstream summary;
    summary << config_comment(embedded) << "name,value\n";
    for (const auto& [name, value] : report.averaged) summary << name << "_bar," << csv::format_number(value) << '\n';
    summary << "r_training," << csv::format_number(report.r_training) << '\n';
    summary << "r_testing," << csv::format_number(report.r_testing) << '\n';
    summary << "passed," << (report.passed ? 1 : 0) << '\n';
    write(join_path(config.out_dir, "tune_summary.csv"), summary.str(), outcome);
  } else {
    json doc;
    doc["config"] = embedded;
    doc["averaged"] = report.averaged;
    doc["r_training"] = report.r_training;
    doc["r_testing"] = report.r_testing;
    doc["passed"] = report.passed;
    doc["grid"] = report.points;
    doc["residuals"] = report.residuals;
    doc["folds"] = json::array();
    for (const auto& f : report.folds) {
      doc["folds"].push_back({{"held_out", f.held_out},
                              {"chosen", report.points[f.chosen_point]},
                              {"training_residual", f.training_residual},
                              {"testing_residual", f.testing_residual}});
    }
    write(join_path(config.out_dir, "tune.json"), doc.dump(2) + "\n", outcome);
  }
  return outcome;
}

}  // namespace

RunOutcome run(const ExperimentConfig& config, std::ostream& log) {
  SignalSource source = build_source(config);
  for (Index m : config.m_values) {
    if (m < 1 || m > source.rows) {
      throw ConfigError("m_values: " + std::to_string(m) + " outside 1.." + std::to_string(source.rows));
    }
  }
  switch (config.kind) {
    case ExperimentKind::Simulate: return run_simulate(config, source);
    case ExperimentKind::Recover:
    case ExperimentKind::Benchmark: return run_benchmark_or_recover(config, std::move(source), log);
    case ExperimentKind::Tune: return run_tune(config, std::move(source), log);
  }
  return {};
}

}  // namespace mscs
