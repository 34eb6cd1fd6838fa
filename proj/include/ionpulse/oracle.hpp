// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <complex>
#include <stdexcept>
#include <utility>

#include "ionpulse/types.hpp"

namespace ionpulse::oracle {

/// Brute-force checks on the untruncated product space
/// (2^N internal states) x (phonon Fock levels 0..cutoff). Nothing here is
/// block-diagonalized by symmetry on purpose: the module exists to confirm
/// independently that the dynamics stays inside the symmetric ladder.

/// Full-space feasibility ceiling (state dimension 2^12 * 17 at the default
/// cutoff); the ladder model itself has no such limit.
constexpr int kMaxIons = 12;

/// Default Fock truncation N + 4: evolution from the ground state cannot
/// pass nu = N, so the buffer makes truncation error measurable.
inline int default_phonon_cutoff(int n_ions) { return n_ions + 4; }

class CutoffError : public std::runtime_error {
 public:
  CutoffError(const std::string& message, double leakage)
      : std::runtime_error(message), leakage_(leakage) {}
  double leakage() const { return leakage_; }

 private:
  double leakage_;
};

/// Amplitudes indexed by (internal bitstring b, phonon number nu) as
/// b * (cutoff + 1) + nu; bit k of b is the k-th ion's excitation.
struct FullState {
  Eigen::VectorXcd amplitudes;
  int n_ions = 0;
  int phonon_cutoff = 0;

  Eigen::Index index(std::uint32_t bits, int nu) const {
    return static_cast<Eigen::Index>(bits) * (phonon_cutoff + 1) + nu;
  }
};

struct FullGenerator {
  Eigen::SparseMatrix<std::complex<double>> matrix;
  int n_ions = 0;
  int phonon_cutoff = 0;
};

/// Time-integrated pulse generator on the truncated product space:
/// (A*pi/2) [ e^{i*phi*pi} a^dagger(eta) J_+ + h.c. ], where
/// <nu+1| a^dagger(eta) |nu> = L^1_nu(eta^2) / sqrt(nu+1).
/// Requires phonon_cutoff >= n_ions (the ladder must fit).
FullGenerator build_full_generator(const SystemConfig& config, const Pulse& pulse,
                                   int phonon_cutoff);

/// exp(-i g) psi by sub-stepped Taylor summation; step count scales with
/// the generator norm so each partial sum stays well conditioned.
Eigen::VectorXcd apply_exponential(const Eigen::SparseMatrix<std::complex<double>>& g,
                                   Eigen::VectorXcd psi);

/// Evolve |00..0>|0> through the sequence on the full space. Throws
/// CutoffError when truncation-exposed population (states at the top Fock
/// level that still have open upward transitions) reaches 1e-12.
FullState evolve_full(const SystemConfig& config, const PulseSequence& seq, int phonon_cutoff);

/// Ladder coordinates of a full state: chain[n] is the overlap with the
/// n-excitation symmetric state at nu = n; leakage is the population
/// outside those N+1 coordinates.
std::pair<ChainState, double> project_to_chain(const FullState& full);

struct FactorizationReport {
  double max_amplitude_discrepancy = 0.0;
  double max_leakage = 0.0;
};

/// Runs the full-space evolution next to the (N+1)-dimensional model and
/// compares amplitudes at every pulse boundary.
FactorizationReport verify_factorization(const SystemConfig& config, const PulseSequence& seq,
                                         int phonon_cutoff);

struct SymmetryReport {
  double expected_j2_eigenvalue = 0.0;  // (1 + N/2) N/2
  double max_j2_deviation = 0.0;        // over all symmetric basis states
  double max_swap_deviation = 0.0;      // over all states and ion pairs
};

/// Confirms the symmetric states are J^2 eigenvectors with eigenvalue
/// (1 + N/2) N/2 and are fixed by every two-ion swap.
SymmetryReport symmetry_spectrum_check(int n_ions);

// Exposed pieces used by the checks above and by tests.

/// Total-spin-squared operator on the 2^N internal space.
Eigen::SparseMatrix<std::complex<double>> total_spin_squared(int n_ions);

/// J^2 (x) identity on the truncated product space.
Eigen::SparseMatrix<std::complex<double>> total_spin_squared_full(int n_ions, int phonon_cutoff);

/// Symmetric n-excitation state on the 2^N internal space (uniform over
/// all bitstrings of weight n, amplitude 1/sqrt(C(N,n))).
Eigen::VectorXcd symmetric_internal_state(int n_ions, int n_excitations);

}  // namespace ionpulse::oracle
