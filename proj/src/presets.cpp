#include <algorithm>
#include <cctype>

#include "mscs/error.hpp"
#include "mscs/presets.hpp"

namespace mscs {
namespace {

struct PresetName {
  Preset preset;
  const char* name;
};

constexpr PresetName kNames[] = {
    {Preset::BP, "BP"},         {Preset::BPDN, "BPDN"},           {Preset::L2L1, "L2L1"},
    {Preset::TV, "TV"},         {Preset::Nuclear, "NUCLEAR"},     {Preset::L1TV, "L1TV"},
    {Preset::L2L1TV, "L2L1TV"}, {Preset::L1L1, "L1L1"},           {Preset::L1Nuclear, "L1NUCLEAR"},
    {Preset::L1TV1TV2, "L1TV1TV2"},
};

double require(const std::optional<double>& value, Preset preset, const char* field) {
  if (!value) throw ParameterError(to_string(preset) + " requires parameter '" + field + "'");
  if (!(*value >= 0.0)) throw ParameterError(std::string(field) + " must be non-negative");
  return *value;
}

// L1 of a dictionary output; complex modulus when the dictionary is a DFT.
Regularizer sparse_term(const AnalysisOperator& dict, Index columns, double weight) {
  if (dict.kind() == AnalysisOperator::Kind::Dft) {
    if (columns != 1) throw ParameterError("DFT dictionaries are supported in vector mode only");
    return Regularizer::group_l2(dict, GroupStructure::paired_halves(dict.rows()), weight);
  }
  return Regularizer::l1(dict, weight);
}

}  // namespace

std::string to_string(Preset preset) {
  for (const auto& entry : kNames) {
    if (entry.preset == preset) return entry.name;
  }
  return "UNKNOWN";
}

Preset preset_from_string(const std::string& name) {
  std::string upper = name;
  std::transform(upper.begin(), upper.end(), upper.begin(),
                 [](unsigned char c) { return static_cast<char>(std::toupper(c)); });
  upper.erase(std::remove_if(upper.begin(), upper.end(), [](char c) { return c == '-' || c == '/' || c == '_'; }),
              upper.end());
  for (const auto& entry : kNames) {
    if (upper == entry.name) return entry.preset;
  }
  throw ParameterError("unknown recovery preset: " + name);
}

bool preset_is_matrix(Preset preset) {
  return preset == Preset::Nuclear || preset == Preset::L1Nuclear;
}

RecoveryProblem make_preset(Preset preset, const Eigen::MatrixXd& measurements,
                            const Eigen::MatrixXd& sensing, const PresetParams& params) {
  const Index n = sensing.cols();
  const Index columns = measurements.cols();

  RecoveryProblem problem;
  problem.measurements = measurements;
  problem.sensing = sensing;
  problem.epsilon = params.epsilon;
  problem.mode = (preset_is_matrix(preset) || columns > 1) ? RecoveryMode::Matrix
                                                           : RecoveryMode::Vector;

  const auto difference = [&] {
    return AnalysisOperator::difference(params.tv.order, params.tv.direction, params.tv.boundary, n);
  };
  const AnalysisOperator dict = params.dictionary
                                    ? *params.dictionary
                                    : (preset == Preset::L1Nuclear ? difference()
                                                                   : AnalysisOperator::identity(n));
  const auto groups = [&]() -> GroupStructure {
    if (!params.groups) throw ParameterError(to_string(preset) + " requires a group structure");
    return *params.groups;
  };

  auto& regs = problem.regularizers;
  switch (preset) {
    case Preset::BP:
      problem.epsilon = 0.0;
      regs.push_back(sparse_term(dict, columns, 1.0));
      break;
    case Preset::BPDN:
      regs.push_back(sparse_term(dict, columns, 1.0));
      break;
    case Preset::L2L1:
      regs.push_back(Regularizer::group_l2(dict, groups(), 1.0));
      break;
    case Preset::TV:
      regs.push_back(Regularizer::l1(difference(), 1.0));
      break;
    case Preset::Nuclear:
      problem.epsilon = 0.0;
      regs.push_back(Regularizer::nuclear(AnalysisOperator::identity(n), 1.0));
      break;
    case Preset::L1TV:
      regs.push_back(Regularizer::l1(difference(), 1.0));
      regs.push_back(sparse_term(dict, columns, require(params.lambda2, preset, "lambda2")));
      break;
    case Preset::L2L1TV:
      regs.push_back(Regularizer::l1(difference(), 1.0));
      regs.push_back(Regularizer::group_l2(dict, groups(), require(params.lambda2, preset, "lambda2")));
      break;
    case Preset::L1L1: {
      regs.push_back(Regularizer::l1(AnalysisOperator::identity(n), 1.0));
      const AnalysisOperator fourier = AnalysisOperator::dft(n);
      regs.push_back(sparse_term(fourier, columns, require(params.lambda2, preset, "lambda2")));
      break;
    }
    case Preset::L1Nuclear:
      regs.push_back(sparse_term(dict, columns, 1.0));
      regs.push_back(Regularizer::nuclear(AnalysisOperator::identity(n),
                                          require(params.lambda2, preset, "lambda2")));
      break;
    case Preset::L1TV1TV2: {
      const AnalysisOperator d = difference();
      regs.push_back(Regularizer::l1(d, 1.0));
      regs.push_back(Regularizer::group_l2(d, GroupStructure::whole(d.rows() * columns),
                                           require(params.tv_mix, preset, "tv_mix")));
      regs.push_back(sparse_term(dict, columns, require(params.lambda2, preset, "lambda2")));
      break;
    }
  }
  return problem;
}

}  // namespace mscs
