// SPDX-License-Identifier: Apache-2.0
#include "ionpulse/robustness.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "ionpulse/chain.hpp"

namespace ionpulse::robustness {

PulseSequence perturb(const PulseSequence& seq, const NoiseModel& model,
                      std::uint64_t trial_index) {
  model.validate();
  if (model.sigma == 0.0) return seq;

  std::vector<Pulse> noisy;
  noisy.reserve(seq.size());
  for (std::size_t k = 0; k < seq.size(); ++k) {
    Rng rng(mix_seed(model.rng_seed, trial_index, static_cast<std::uint64_t>(k)));
    const double area_eps = rng.normal() * model.sigma;
    const double area = std::max(seq[k].area() * (1.0 + area_eps), 0.0);
    double phase = seq[k].phase();
    if (model.mode == NoiseMode::relative_area_absolute_phase) {
      phase += rng.normal() * model.sigma;
    } else {
      phase *= 1.0 + rng.normal() * model.sigma;
    }
    noisy.emplace_back(area, phase);
  }
  return PulseSequence(std::move(noisy));
}

RobustnessCurve fidelity_vs_sigma(const SystemConfig& config, const PulseSequence& seq,
                                  const TargetSpec& target, std::vector<double> sigmas,
                                  const NoiseModel& model, FidelityMode mode) {
  model.validate();
  const ChainModel chain(config);
  std::sort(sigmas.begin(), sigmas.end());

  RobustnessCurve curve;
  curve.points.reserve(sigmas.size());
  for (const double sigma : sigmas) {
    CurvePoint point;
    point.sigma = sigma;
    if (sigma == 0.0) {
      // all realizations coincide with the input sequence
      const double fidelity = chain.fidelity(seq, target, mode);
      point.mean_fidelity = point.min_fidelity = fidelity;
      point.std_fidelity = 0.0;
      curve.points.push_back(point);
      continue;
    }

    NoiseModel scaled = model;
    scaled.sigma = sigma;
    double sum = 0.0;
    double sum_sq = 0.0;
    double minimum = std::numeric_limits<double>::infinity();
    for (int trial = 0; trial < model.trials; ++trial) {
      const double fidelity =
          chain.fidelity(perturb(seq, scaled, static_cast<std::uint64_t>(trial)), target, mode);
      sum += fidelity;
      sum_sq += fidelity * fidelity;
      minimum = std::min(minimum, fidelity);
    }
    const double n = static_cast<double>(model.trials);
    point.mean_fidelity = sum / n;
    const double variance =
        model.trials > 1 ? std::max(0.0, (sum_sq - sum * sum / n) / (n - 1.0)) : 0.0;
    point.std_fidelity = std::sqrt(variance);
    point.min_fidelity = minimum;
    curve.points.push_back(point);
  }
  return curve;
}

}  // namespace ionpulse::robustness
