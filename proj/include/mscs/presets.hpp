#pragma once

#include <optional>
#include <string>

#include "mscs/solver.hpp"

namespace mscs {

// Named recovery programs. Every multi-structure preset fixes the weight of
// its first term to 1.
enum class Preset {
  BP,         // min ||Psi x||_1              s.t. y = Phi x
  BPDN,       // min ||Psi x||_1              s.t. ||y - Phi x|| <= eps
  L2L1,       // min sum_d ||(Psi x)_d||_2    s.t. ||y - Phi x|| <= eps
  TV,         // min ||D x||_1                s.t. ||y - Phi x|| <= eps
  Nuclear,    // min ||X||_*                  s.t. Y = Phi X
  L1TV,       // min ||D x||_1 + l2 ||Psi x||_1
  L2L1TV,     // min ||D x||_1 + l2 sum_d ||(Psi x)_d||_2
  L1L1,       // min ||x||_1 + l2 ||F x||_1 (complex modulus)
  L1Nuclear,  // min ||vec(Psi X)||_1 + l2 ||X||_*
  L1TV1TV2,   // min ||D x||_1 + mix ||D x||_2 + l2 ||Psi x||_1
};

std::string to_string(Preset preset);
// Accepts the names produced by to_string, case-insensitively.
Preset preset_from_string(const std::string& name);
bool preset_is_matrix(Preset preset);

struct DifferenceSpec {
  int order = 1;
  DiffDirection direction = DiffDirection::Forward;
  DiffBoundary boundary = DiffBoundary::Truncated;
};

struct PresetParams {
  // Sparsity dictionary Psi. Defaults: identity, except L1Nuclear which uses
  // the first-order difference operator. A DFT dictionary turns every L1 term
  // on it into the complex-modulus norm.
  std::optional<AnalysisOperator> dictionary;
  // Required by L2L1 and L2L1TV; indices into the dictionary output.
  std::optional<GroupStructure> groups;
  // Weight of the second structure; required by every multi-structure preset.
  std::optional<double> lambda2;
  // Weight of the TV2 term in L1TV1TV2.
  std::optional<double> tv_mix;
  double epsilon = 0.0;
  DifferenceSpec tv;
};

// Builds the regularizer stack for `preset` around measurements y (M x R)
// and sensing matrix phi. Throws ParameterError when a required parameter is
// missing.
RecoveryProblem make_preset(Preset preset, const Eigen::MatrixXd& measurements,
                            const Eigen::MatrixXd& sensing, const PresetParams& params);

}  // namespace mscs
