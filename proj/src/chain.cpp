// SPDX-License-Identifier: Apache-2.0
#include "ionpulse/chain.hpp"

#include <complex>

namespace ionpulse {

using std::complex;
namespace {
constexpr complex<double> kI{0.0, 1.0};
}

double laguerre_assoc(int n, double x) {
  if (n < 0) throw std::invalid_argument("laguerre_assoc: n must be >= 0");
  if (!(x >= 0.0)) throw std::invalid_argument("laguerre_assoc: x must be >= 0");
  if (n == 0) return 1.0;
  double prev = 1.0;
  double curr = 2.0 - x;
  for (int k = 1; k < n; ++k) {
    const double next = ((2.0 * k + 2.0 - x) * curr - (k + 1.0) * prev) / (k + 1.0);
    prev = curr;
    curr = next;
  }
  return curr;
}

Eigen::VectorXd chain_couplings(const SystemConfig& config) {
  config.validate();
  const int n = config.n_ions;
  const double x = config.lamb_dicke * config.lamb_dicke;
  Eigen::VectorXd c(n);
  for (int nu = 1; nu <= n; ++nu)
    c[nu - 1] = laguerre_assoc(nu - 1, x) * std::sqrt(static_cast<double>(n - nu + 1));
  return c;
}

ChainModel::ChainModel(const SystemConfig& config) : config_(config) {
  config_.validate();
  couplings_ = chain_couplings(config_);
  const int d = dim();
  Eigen::MatrixXd coupling_matrix = Eigen::MatrixXd::Zero(d, d);
  for (int n = 1; n < d; ++n) {
    coupling_matrix(n - 1, n) = couplings_[n - 1];
    coupling_matrix(n, n - 1) = couplings_[n - 1];
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(coupling_matrix);
  if (solver.info() != Eigen::Success)
    throw std::runtime_error("ChainModel: eigendecomposition failed");
  eigenvalues_ = solver.eigenvalues();
  modes_ = solver.eigenvectors().cast<complex<double>>();
}

Eigen::MatrixXcd ChainModel::generator(const Pulse& pulse) const {
  const int d = dim();
  const double scale = pulse.area() * M_PI / 2.0;
  const complex<double> lower = scale * std::exp(kI * (pulse.phase() * M_PI));
  Eigen::MatrixXcd g = Eigen::MatrixXcd::Zero(d, d);
  for (int n = 1; n < d; ++n) {
    g(n, n - 1) = couplings_[n - 1] * lower;
    g(n - 1, n) = std::conj(g(n, n - 1));
  }
  return g;
}

void ChainModel::apply_raw(double area, double phase, Eigen::VectorXcd& state) const {
  const int d = dim();
  const double scale = area * M_PI / 2.0;
  const complex<double> step = std::exp(-kI * (phase * M_PI));

  // state <- D(phi) V exp(-i a Lambda) V^T D(phi)^dagger state
  complex<double> gauge = 1.0;
  for (int n = 1; n < d; ++n) {
    gauge *= step;
    state[n] *= gauge;
  }
  static thread_local Eigen::VectorXcd mode_amps;
  mode_amps.resize(d);
  mode_amps.noalias() = modes_.transpose() * state;
  for (int j = 0; j < d; ++j)
    mode_amps[j] *= std::exp(-kI * (scale * eigenvalues_[j]));
  state.noalias() = modes_ * mode_amps;
  gauge = 1.0;
  const complex<double> unstep = std::conj(step);
  for (int n = 1; n < d; ++n) {
    gauge *= unstep;
    state[n] *= gauge;
  }
}

Eigen::MatrixXcd ChainModel::propagator(const Pulse& pulse) const {
  const int d = dim();
  Eigen::MatrixXcd u(d, d);
  Eigen::VectorXcd column;
  for (int j = 0; j < d; ++j) {
    column = Eigen::VectorXcd::Zero(d);
    column[j] = 1.0;
    apply(pulse, column);
    u.col(j) = column;
  }
  return u;
}

Eigen::MatrixXcd ChainModel::propagator(const PulseSequence& seq) const {
  Eigen::MatrixXcd u = Eigen::MatrixXcd::Identity(dim(), dim());
  for (const auto& pulse : seq) {
    for (int j = 0; j < dim(); ++j) {
      Eigen::VectorXcd column = u.col(j);
      apply(pulse, column);
      u.col(j) = column;
    }
  }
  return u;
}

Eigen::VectorXcd ChainModel::evolve_ground(const PulseSequence& seq) const {
  Eigen::VectorXcd state = Eigen::VectorXcd::Zero(dim());
  state[0] = 1.0;
  for (const auto& pulse : seq) apply(pulse, state);
  return state;
}

double ChainModel::overlap_fidelity(const TargetSpec& target, const Eigen::VectorXcd& state,
                                    FidelityMode mode) {
  const auto top = state.size() - 1;
  if (mode == FidelityMode::phase_maximized) {
    complex<double> head{0.0, 0.0};
    for (Eigen::Index n = 0; n < top; ++n) head += std::conj(target.amplitudes[n]) * state[n];
    const complex<double> tail = std::conj(target.amplitudes[top]) * state[top];
    const double amplitude = std::abs(head) + std::abs(tail);
    return amplitude * amplitude;
  }
  return std::norm(target.amplitudes.dot(state));
}

double ChainModel::fidelity(const PulseSequence& seq, const TargetSpec& target,
                            FidelityMode mode) const {
  if (target.amplitudes.size() != dim())
    throw std::invalid_argument("fidelity: target dimension does not match the chain");
  return overlap_fidelity(target, evolve_ground(seq), mode);
}

Eigen::MatrixXcd build_generator(const SystemConfig& config, const Pulse& pulse) {
  return ChainModel(config).generator(pulse);
}

Eigen::MatrixXcd pulse_propagator(const SystemConfig& config, const Pulse& pulse) {
  return ChainModel(config).propagator(pulse);
}

Eigen::MatrixXcd sequence_propagator(const SystemConfig& config, const PulseSequence& seq) {
  return ChainModel(config).propagator(seq);
}

TargetSpec dicke_target(int n_ions, int n_excitations) {
  if (n_ions < 1) throw std::invalid_argument("dicke_target: n_ions must be >= 1");
  if (n_excitations < 0 || n_excitations > n_ions)
    throw std::invalid_argument("dicke_target: excitation number out of range");
  Eigen::VectorXcd amps = Eigen::VectorXcd::Zero(n_ions + 1);
  amps[n_excitations] = 1.0;
  return TargetSpec{std::move(amps)};
}

TargetSpec noon_target(int n_ions) {
  if (n_ions < 1) throw std::invalid_argument("noon_target: n_ions must be >= 1");
  Eigen::VectorXcd amps = Eigen::VectorXcd::Zero(n_ions + 1);
  amps[0] = amps[n_ions] = 1.0 / std::sqrt(2.0);
  return TargetSpec{std::move(amps)};
}

double fidelity(const SystemConfig& config, const PulseSequence& seq, const TargetSpec& target,
                FidelityMode mode) {
  return ChainModel(config).fidelity(seq, target, mode);
}

}  // namespace ionpulse
