// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>

#include <json.hpp>

#include "ionpulse/optim.hpp"
#include "ionpulse/robustness.hpp"
#include "ionpulse/types.hpp"

namespace ionpulse::io {

/// Thrown for malformed input files; message carries file and position.
class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct SequenceFile {
  SystemConfig system;
  PulseSequence pulses;
};

/// On-disk sequence format (units of pi throughout):
/// { "system": {"n_ions": N, "lamb_dicke": eta, "trap_frequency": w},
///   "pulses": [{"area": A, "phase": phi}, ...] }
/// trap_frequency is optional and defaults to 4e6 rad/s.
SequenceFile load_sequence(const std::filesystem::path& path);
void save_sequence(const std::filesystem::path& path, const SystemConfig& system,
                   const PulseSequence& pulses);

nlohmann::json sequence_to_json(const SystemConfig& system, const PulseSequence& pulses);
SequenceFile sequence_from_json(const nlohmann::json& j);

struct LoadedTarget {
  TargetSpec target;
  bool renormalized = false;
  double norm_defect = 0.0;  // |norm - 1| before correction
};

/// Custom target file: { "amplitudes": [[re, im], ...] } of length N+1.
/// Norm defect up to 1e-9 is accepted as-is, up to 1e-3 renormalized
/// (renormalized flag set), beyond that rejected with ParseError.
LoadedTarget load_custom_target(const std::filesystem::path& path, int n_ions);

struct SolutionsFile {
  SystemConfig system;
  std::string target_description;
  FidelityMode fidelity_mode = FidelityMode::fixed_phase;
  bool goal_met = false;
  std::vector<optim::Solution> solutions;
};

void save_solutions(const std::filesystem::path& path, const SystemConfig& system,
                    const std::string& target_description, const optim::SearchConfig& search,
                    FidelityMode mode, const optim::SynthesisResult& result);
SolutionsFile load_solutions(const std::filesystem::path& path);

/// CSV with header sigma,mean_fidelity,std_fidelity,min_fidelity.
void write_robustness_csv(std::ostream& out, const robustness::RobustnessCurve& curve);

std::string fidelity_mode_name(FidelityMode mode);

}  // namespace ionpulse::io
