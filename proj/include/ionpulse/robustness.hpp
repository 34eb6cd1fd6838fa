// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "ionpulse/types.hpp"

namespace ionpulse::robustness {

/// How a noise scale sigma is applied to the two parameter kinds.
/// relative_area_absolute_phase: A -> A(1 + eps), phi -> phi + delta with
/// delta ~ N(0, sigma) in units of pi (i.e. sigma*pi radians of jitter).
/// relative_both: both parameters scaled by independent (1 + eps) factors.
enum class NoiseMode { relative_area_absolute_phase, relative_both };

struct NoiseModel {
  double sigma = 0.01;
  int trials = 1000;
  std::uint64_t rng_seed = 0;
  NoiseMode mode = NoiseMode::relative_area_absolute_phase;

  void validate() const {
    if (!(sigma >= 0.0)) throw std::invalid_argument("NoiseModel: sigma must be >= 0");
    if (trials < 1) throw std::invalid_argument("NoiseModel: trials must be >= 1");
  }
};

/// One noisy realization of a sequence. Draws depend only on
/// (rng_seed, trial_index, pulse index), never on evaluation order;
/// perturbed areas are clamped at zero.
PulseSequence perturb(const PulseSequence& seq, const NoiseModel& model,
                      std::uint64_t trial_index);

struct CurvePoint {
  double sigma = 0.0;
  double mean_fidelity = 0.0;
  double std_fidelity = 0.0;
  double min_fidelity = 0.0;
};

struct RobustnessCurve {
  std::vector<CurvePoint> points;  // sorted by sigma
  std::string sequence_id;
  std::string target_id;
};

/// Mean/spread/minimum of the fidelity over `model.trials` perturbed
/// realizations, for each sigma in the grid (sorted ascending on output).
/// sigma = 0 reproduces the unperturbed fidelity exactly.
RobustnessCurve fidelity_vs_sigma(const SystemConfig& config, const PulseSequence& seq,
                                  const TargetSpec& target, std::vector<double> sigmas,
                                  const NoiseModel& model,
                                  FidelityMode mode = FidelityMode::fixed_phase);

}  // namespace ionpulse::robustness
