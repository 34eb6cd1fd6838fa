// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <Eigen/Dense>

#include "ionpulse/types.hpp"

namespace ionpulse {

/// Generalized Laguerre polynomial L^1_n(x) by the three-term recurrence
/// (k+1) L^1_{k+1} = (2k+2-x) L^1_k - (k+1) L^1_{k-1}, L^1_0 = 1,
/// L^1_1 = 2 - x. Requires n >= 0, x >= 0.
double laguerre_assoc(int n, double x);

/// Dimensionless neighbor couplings lambda_{nu-1,nu}/g of the symmetric
/// ladder, nu = 1..N: L^1_{nu-1}(eta^2) * sqrt(N - nu + 1). For eta = 0
/// this reduces to nu * sqrt(N - nu + 1).
Eigen::VectorXd chain_couplings(const SystemConfig& config);

/// Exact single-pulse and sequence propagators on the (N+1)-state ladder.
///
/// The time-integrated generator of a pulse with area A and phase phi
/// (both in units of pi) is the Hermitian tridiagonal matrix
///   G(n-1, n) = (A*pi/2) * c_n * exp(-i*phi*pi),   c = chain_couplings,
/// and the propagator is exp(-iG). The phase enters as a diagonal gauge,
///   G = (A*pi/2) * D(phi) C D(phi)^dagger,  D = diag(exp(i*n*phi*pi)),
/// so one spectral decomposition of the real symmetric C, done at
/// construction, serves every pulse; propagators are unitary to rounding.
class ChainModel {
 public:
  explicit ChainModel(const SystemConfig& config);

  int n_ions() const { return config_.n_ions; }
  int dim() const { return config_.n_ions + 1; }
  const SystemConfig& config() const { return config_; }
  const Eigen::VectorXd& couplings() const { return couplings_; }

  Eigen::MatrixXcd generator(const Pulse& pulse) const;
  Eigen::MatrixXcd propagator(const Pulse& pulse) const;
  Eigen::MatrixXcd propagator(const PulseSequence& seq) const;

  /// Applies exp(-iG) in place, O(N^2). Area may be any finite value here;
  /// the optimizer differentiates through the boundary of the area box.
  void apply_raw(double area, double phase, Eigen::VectorXcd& state) const;
  void apply(const Pulse& pulse, Eigen::VectorXcd& state) const {
    apply_raw(pulse.area(), pulse.phase(), state);
  }

  /// Final state of the full sequence acting on the ground rung e_0.
  Eigen::VectorXcd evolve_ground(const PulseSequence& seq) const;

  double fidelity(const PulseSequence& seq, const TargetSpec& target,
                  FidelityMode mode = FidelityMode::fixed_phase) const;

  /// Overlap score of an evolved state against a target. In
  /// phase_maximized mode the relative phase of the target's top-rung
  /// component is optimized out: (|alpha| + |beta|)^2 with
  /// alpha = sum_{n<N} conj(t_n) psi_n and beta = conj(t_N) psi_N.
  static double overlap_fidelity(const TargetSpec& target, const Eigen::VectorXcd& state,
                                 FidelityMode mode);

 private:
  SystemConfig config_;
  Eigen::VectorXd couplings_;
  Eigen::VectorXd eigenvalues_;  // spectrum of C
  Eigen::MatrixXcd modes_;       // eigenvectors of C (real, stored complex)
};

// Spec'd free-function surface; each forwards to a ChainModel.

Eigen::MatrixXcd build_generator(const SystemConfig& config, const Pulse& pulse);
Eigen::MatrixXcd pulse_propagator(const SystemConfig& config, const Pulse& pulse);
Eigen::MatrixXcd sequence_propagator(const SystemConfig& config, const PulseSequence& seq);

/// Basis target e_n: the n-excitation symmetric state with n phonons.
/// Throws std::invalid_argument unless 0 <= n_excitations <= n_ions.
TargetSpec dicke_target(int n_ions, int n_excitations);

/// (e_0 + e_N)/sqrt(2); the relative phase of the two components is a
/// convention, see FidelityMode::phase_maximized.
TargetSpec noon_target(int n_ions);

/// |<t|U_tot|e_0>|^2 (or its phase-maximized variant).
double fidelity(const SystemConfig& config, const PulseSequence& seq, const TargetSpec& target,
                FidelityMode mode = FidelityMode::fixed_phase);

}  // namespace ionpulse
