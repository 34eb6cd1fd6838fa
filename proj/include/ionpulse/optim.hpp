// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <utility>
#include <vector>

#include "ionpulse/chain.hpp"
#include "ionpulse/types.hpp"

namespace ionpulse::optim {

/// Multistart search settings. The free parameters of an N-pulse sequence
/// are the N areas and the N-1 phases of pulses 2..N; the first phase is
/// the phase reference and is pinned to zero.
struct SearchConfig {
  int n_restarts = 500;
  double fidelity_goal = 0.999;  // a solution "qualifies" at or above this
  int max_iterations = 500;      // per restart
  double gradient_step = 1e-6;   // central-difference step, units of pi
  double convergence_tol = 1e-9; // on the projected-gradient infinity norm
  double area_min = 0.0;
  double area_max = 2.0;         // units of pi; each pulse rotation is 2pi-periodic
  std::uint64_t rng_seed = 0;
  int threads = 0;               // 0 = hardware concurrency

  void validate() const;

  /// Default budget by system size: 500 restarts up to 6 ions, 2000 beyond.
  static SearchConfig for_ions(int n_ions);
};

struct Solution {
  PulseSequence sequence;
  double fidelity = 0.0;
  double total_area = 0.0;  // units of pi
  int restart_index = 0;
  int iterations = 0;
};

/// Qualifying solutions sorted by ascending total area (ties within 1e-6
/// broken by higher fidelity, then restart index). When no restart reaches
/// the goal, solutions holds the single best-fidelity attempt and goal_met
/// is false.
struct SynthesisResult {
  std::vector<Solution> solutions;
  bool goal_met = false;

  const Solution& best() const { return solutions.front(); }
};

/// Parameter vector layout: [A_1..A_N, phi_2..phi_N], length 2N-1.
Eigen::VectorXd random_start(int n_ions, const SearchConfig& search, Rng& rng);

/// Materialize a parameter vector as a sequence; phases are wrapped into
/// [0, 2) and the first phase is exactly zero.
PulseSequence params_to_sequence(int n_ions, const Eigen::VectorXd& params);

/// Fidelity at params together with its central-difference gradient.
std::pair<double, Eigen::VectorXd> objective_gradient(const ChainModel& model,
                                                      const TargetSpec& target,
                                                      const Eigen::VectorXd& params,
                                                      double gradient_step,
                                                      FidelityMode mode = FidelityMode::fixed_phase);

/// Projected quasi-Newton ascent (BFGS inverse-Hessian approximation,
/// backtracking line search, areas clipped to the search box).
Solution local_refine(const ChainModel& model, const TargetSpec& target,
                      const Eigen::VectorXd& start, const SearchConfig& search,
                      FidelityMode mode = FidelityMode::fixed_phase, int restart_index = 0);

/// Independent restarts from Monte-Carlo initial points; each restart owns
/// the rng stream derived from (rng_seed, restart_index), so the result is
/// identical however restarts are scheduled across threads.
SynthesisResult synthesize(const SystemConfig& config, const TargetSpec& target,
                           const SearchConfig& search,
                           FidelityMode mode = FidelityMode::fixed_phase);

}  // namespace ionpulse::optim
