// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

namespace ionpulse {

enum class Sideband { blue };

/// Static description of the ion chain and the drive geometry.
/// Areas and phases everywhere in this library are dimensionless,
/// expressed in units of pi; trap_frequency is in rad/s and enters
/// only through timing conversions.
struct SystemConfig {
  int n_ions = 1;
  double lamb_dicke = 0.0;        // eta; 0 selects the harmonic-ladder limit
  double trap_frequency = 4.0e6;  // rad/s
  Sideband sideband = Sideband::blue;

  void validate() const {
    if (n_ions < 1) throw std::invalid_argument("SystemConfig: n_ions must be >= 1");
    if (!(lamb_dicke >= 0.0))
      throw std::invalid_argument("SystemConfig: lamb_dicke must be >= 0");
    if (!(trap_frequency > 0.0))
      throw std::invalid_argument("SystemConfig: trap_frequency must be > 0");
  }
};

/// One resonant sideband pulse: area A (units of pi, >= 0) and phase
/// phi (units of pi, normalized into [0, 2)).
class Pulse {
 public:
  Pulse(double area, double phase) : area_(area), phase_(wrap_phase(phase)) {
    if (!(area >= 0.0)) throw std::invalid_argument("Pulse: area must be >= 0");
  }

  double area() const { return area_; }
  double phase() const { return phase_; }

  /// Reduce a phase (units of pi) into [0, 2).
  static double wrap_phase(double phase) {
    if (!std::isfinite(phase)) throw std::invalid_argument("Pulse: phase must be finite");
    double p = std::fmod(phase, 2.0);
    if (p < 0.0) p += 2.0;
    if (p == 2.0) p = 0.0;  // fmod can land on the closed end after rounding
    return p;
  }

 private:
  double area_;
  double phase_;
};

/// Ordered composite sequence; pulse 1 acts first. A first-pulse phase of
/// zero is the optimizer's phase-reference convention, not a constraint on
/// externally supplied sequences.
class PulseSequence {
 public:
  explicit PulseSequence(std::vector<Pulse> pulses) : pulses_(std::move(pulses)) {
    if (pulses_.empty())
      throw std::invalid_argument("PulseSequence: at least one pulse required");
  }

  std::size_t size() const { return pulses_.size(); }
  const Pulse& operator[](std::size_t k) const { return pulses_[k]; }
  auto begin() const { return pulses_.begin(); }
  auto end() const { return pulses_.end(); }

  double total_area() const {
    double sum = 0.0;
    for (const auto& p : pulses_) sum += p.area();
    return sum;
  }

 private:
  std::vector<Pulse> pulses_;
};

/// Amplitudes over the symmetric ladder; index n holds the component on
/// the n-excitation rung (blue sideband: phonon number equals n).
struct ChainState {
  Eigen::VectorXcd amplitudes;

  double norm() const { return amplitudes.norm(); }
};

/// Normalized target amplitudes on the same ladder.
struct TargetSpec {
  Eigen::VectorXcd amplitudes;
};

/// How overlap with a target is scored. phase_maximized frees the relative
/// phase of the top-rung component against the rest of the target, the
/// natural convention for NOON-type superpositions.
enum class FidelityMode { fixed_phase, phase_maximized };

/// SplitMix64 finalizer; used to derive independent stream seeds from
/// (seed, index) pairs so concurrent work is schedule-independent.
inline std::uint64_t mix_seed(std::uint64_t a, std::uint64_t b) {
  std::uint64_t z = a + 0x9E3779B97F4A7C15ull * (b + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

inline std::uint64_t mix_seed(std::uint64_t a, std::uint64_t b, std::uint64_t c) {
  return mix_seed(mix_seed(a, b), c);
}

/// Deterministic generator with pinned uniform/normal mappings, so equal
/// seeds give bit-identical draws on every platform.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {
    // splitmix64 warm-up decorrelates small/sequential seeds
    for (int i = 0; i < 2; ++i) next();
  }

  /// Uniform in [0, 1), 53-bit resolution.
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  /// Standard normal via Box-Muller (cosine branch).
  double normal() {
    double u1 = uniform();
    while (u1 <= 0.0) u1 = uniform();
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
  }

 private:
  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ull);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  }

  std::uint64_t state_;
};

}  // namespace ionpulse
