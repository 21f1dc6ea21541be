#include <CLI11.hpp>

#include <iostream>
#include <optional>
#include <string>

#include "mscs/error.hpp"
#include "mscs/experiment.hpp"

namespace {

struct Overrides {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out_dir;
  std::optional<std::string> format;
  std::optional<int> threads;
};

void add_common_flags(CLI::App* cmd, Overrides& o) {
  cmd->add_option("--config", o.config_path, "experiment config (JSON) or a results file embedding one")
      ->required()
      ->check(CLI::ExistingFile);
  cmd->add_option("--seed", o.seed, "master seed");
  cmd->add_option("--out", o.out_dir, "output directory");
  cmd->add_option("--format", o.format, "output format")->check(CLI::IsMember({"csv", "json"}));
  cmd->add_option("--threads", o.threads, "worker threads for trials")->check(CLI::PositiveNumber);
}

int execute(const std::string& subcommand, const Overrides& o) {
  nlohmann::json doc = mscs::load_config_document(o.config_path);
  if (!doc.is_object()) throw mscs::ConfigError("config must be a JSON object");
  if (doc.contains("experiment")) {
    const auto kind = mscs::experiment_kind_from_string(doc["experiment"].get<std::string>());
    if (mscs::to_string(kind) != subcommand) {
      throw mscs::ConfigError("config is a '" + mscs::to_string(kind) + "' experiment, not '" +
                              subcommand + "'");
    }
  } else {
    doc["experiment"] = subcommand;
  }
  if (o.seed) doc["seed"] = *o.seed;
  if (o.threads) doc["threads"] = *o.threads;
  if (o.out_dir || o.format) {
    nlohmann::json& output = doc["output"];
    if (!output.is_object()) output = nlohmann::json::object();
    if (o.out_dir) output["dir"] = *o.out_dir;
    if (o.format) output["format"] = *o.format;
  }
  const mscs::ExperimentConfig config = mscs::parse_config(doc);
  const mscs::RunOutcome outcome = mscs::run(config, std::cout);
  for (const auto& path : outcome.artifacts) std::cout << "wrote " << path << '\n';
  return outcome.exit_status;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Compressed sensing recovery with multiple structure regularizers"};
  app.require_subcommand(1);
  Overrides overrides;
  for (const char* name : {"simulate", "recover", "benchmark", "tune"}) {
    add_common_flags(app.add_subcommand(name, std::string("run a ") + name + " experiment"), overrides);
  }
  CLI11_PARSE(app, argc, argv);

  const std::string subcommand = app.get_subcommands().front()->get_name();
  try {
    return execute(subcommand, overrides);
  } catch (const mscs::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}
