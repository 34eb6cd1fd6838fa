// SPDX-License-Identifier: Apache-2.0
#include "ionpulse/oracle.hpp"

#include <bit>
#include <cmath>
#include <vector>

#include "ionpulse/chain.hpp"

namespace ionpulse::oracle {

using std::complex;
using Sparse = Eigen::SparseMatrix<complex<double>>;
using Triplet = Eigen::Triplet<complex<double>>;

namespace {

constexpr complex<double> kI{0.0, 1.0};
constexpr double kLeakTolerance = 1e-12;

void check_dimensions(const SystemConfig& config, int phonon_cutoff) {
  config.validate();
  if (config.n_ions > kMaxIons)
    throw std::invalid_argument("oracle: full-space model is limited to 12 ions");
  if (phonon_cutoff < config.n_ions)
    throw std::invalid_argument("oracle: phonon cutoff must be at least the ion count");
}

double binomial(int n, int k) {
  double result = 1.0;
  for (int i = 1; i <= k; ++i) result *= static_cast<double>(n - k + i) / i;
  return result;
}

/// Population on top-Fock-level states that still have an ion to excite;
/// exactly the amplitude a larger cutoff could move further up.
double truncation_exposure(const FullState& state) {
  const std::uint32_t full = (1u << state.n_ions) - 1u;
  double exposed = 0.0;
  for (std::uint32_t b = 0; b < full; ++b)
    exposed += std::norm(state.amplitudes[state.index(b, state.phonon_cutoff)]);
  return exposed;
}

}  // namespace

FullGenerator build_full_generator(const SystemConfig& config, const Pulse& pulse,
                                   int phonon_cutoff) {
  check_dimensions(config, phonon_cutoff);
  const int n = config.n_ions;
  const int levels = phonon_cutoff + 1;
  const Eigen::Index dim = (Eigen::Index{1} << n) * levels;
  const double eta_sq = config.lamb_dicke * config.lamb_dicke;
  const double scale = pulse.area() * M_PI / 2.0;
  const complex<double> raise_phase = std::exp(kI * (pulse.phase() * M_PI));

  std::vector<double> ladder(phonon_cutoff);  // <nu+1| a^dagger(eta) |nu>
  for (int nu = 0; nu < phonon_cutoff; ++nu)
    ladder[nu] = laguerre_assoc(nu, eta_sq) / std::sqrt(nu + 1.0);

  std::vector<Triplet> entries;
  entries.reserve(static_cast<std::size_t>(dim) * n);
  for (std::uint32_t b = 0; b < (1u << n); ++b) {
    for (int k = 0; k < n; ++k) {
      if ((b >> k) & 1u) continue;
      const std::uint32_t b_up = b | (1u << k);
      for (int nu = 0; nu < phonon_cutoff; ++nu) {
        const complex<double> amp = scale * raise_phase * ladder[nu];
        const Eigen::Index row = static_cast<Eigen::Index>(b_up) * levels + nu + 1;
        const Eigen::Index col = static_cast<Eigen::Index>(b) * levels + nu;
        entries.emplace_back(row, col, amp);
        entries.emplace_back(col, row, std::conj(amp));
      }
    }
  }

  FullGenerator generator{Sparse(dim, dim), n, phonon_cutoff};
  generator.matrix.setFromTriplets(entries.begin(), entries.end());
  generator.matrix.makeCompressed();
  return generator;
}

Eigen::VectorXcd apply_exponential(const Sparse& g, Eigen::VectorXcd psi) {
  // 1-norm bounds the spectral radius; keep each sub-step's Taylor series
  // short so intermediate terms never grow past ~e^4.
  double norm1 = 0.0;
  for (int col = 0; col < g.outerSize(); ++col) {
    double sum = 0.0;
    for (Sparse::InnerIterator it(g, col); it; ++it) sum += std::abs(it.value());
    norm1 = std::max(norm1, sum);
  }
  const int steps = std::max(1, static_cast<int>(std::ceil(norm1 / 4.0)));
  const complex<double> factor = -kI / static_cast<double>(steps);

  Eigen::VectorXcd term(psi.size());
  Eigen::VectorXcd next(psi.size());
  for (int s = 0; s < steps; ++s) {
    term = psi;
    next = psi;
    for (int k = 1; k <= 64; ++k) {
      term = (g * term).eval();
      term *= factor / static_cast<double>(k);
      next += term;
      if (term.norm() <= 1e-18 * next.norm()) break;
    }
    psi.swap(next);
  }
  return psi;
}

FullState evolve_full(const SystemConfig& config, const PulseSequence& seq, int phonon_cutoff) {
  check_dimensions(config, phonon_cutoff);
  const int levels = phonon_cutoff + 1;
  const Eigen::Index dim = (Eigen::Index{1} << config.n_ions) * levels;

  FullState state{Eigen::VectorXcd::Zero(dim), config.n_ions, phonon_cutoff};
  state.amplitudes[0] = 1.0;  // |00..0>|0>
  for (const auto& pulse : seq) {
    const FullGenerator generator = build_full_generator(config, pulse, phonon_cutoff);
    state.amplitudes = apply_exponential(generator.matrix, std::move(state.amplitudes));
    const double exposed = truncation_exposure(state);
    if (exposed >= kLeakTolerance)
      throw CutoffError("evolve_full: phonon cutoff too small, truncation-exposed population " +
                            std::to_string(exposed),
                        exposed);
  }
  return state;
}

std::pair<ChainState, double> project_to_chain(const FullState& full) {
  const int n = full.n_ions;
  Eigen::VectorXcd chain = Eigen::VectorXcd::Zero(n + 1);
  for (std::uint32_t b = 0; b < (1u << n); ++b) {
    const int weight = std::popcount(b);
    chain[weight] += full.amplitudes[full.index(b, weight)];
  }
  for (int k = 0; k <= n; ++k) chain[k] /= std::sqrt(binomial(n, k));
  const double kept = chain.squaredNorm();
  return {ChainState{std::move(chain)}, 1.0 - kept};
}

FactorizationReport verify_factorization(const SystemConfig& config, const PulseSequence& seq,
                                         int phonon_cutoff) {
  check_dimensions(config, phonon_cutoff);
  const ChainModel model(config);
  const int levels = phonon_cutoff + 1;
  const Eigen::Index dim = (Eigen::Index{1} << config.n_ions) * levels;

  FullState full{Eigen::VectorXcd::Zero(dim), config.n_ions, phonon_cutoff};
  full.amplitudes[0] = 1.0;
  Eigen::VectorXcd chain = Eigen::VectorXcd::Zero(model.dim());
  chain[0] = 1.0;

  FactorizationReport report;
  for (const auto& pulse : seq) {
    const FullGenerator generator = build_full_generator(config, pulse, phonon_cutoff);
    full.amplitudes = apply_exponential(generator.matrix, std::move(full.amplitudes));
    model.apply(pulse, chain);

    auto [projected, leakage] = project_to_chain(full);
    const double discrepancy = (projected.amplitudes - chain).lpNorm<Eigen::Infinity>();
    report.max_amplitude_discrepancy = std::max(report.max_amplitude_discrepancy, discrepancy);
    report.max_leakage = std::max(report.max_leakage, leakage);
  }
  return report;
}

Eigen::SparseMatrix<std::complex<double>> total_spin_squared(int n_ions) {
  if (n_ions < 1 || n_ions > kMaxIons)
    throw std::invalid_argument("total_spin_squared: unsupported ion count");
  const int n = n_ions;
  const Eigen::Index dim = Eigen::Index{1} << n;

  // Column-by-column action of J- J+ + Jz(Jz + 1) on bitstrings.
  std::vector<Triplet> entries;
  std::vector<complex<double>> column(dim);
  for (std::uint32_t b = 0; b < (1u << n); ++b) {
    std::fill(column.begin(), column.end(), complex<double>{0.0, 0.0});
    // J+ e_b = sum over unset bits; then J- each result
    for (int k = 0; k < n; ++k) {
      if ((b >> k) & 1u) continue;
      const std::uint32_t up = b | (1u << k);
      for (int l = 0; l < n; ++l) {
        if (!((up >> l) & 1u)) continue;
        column[up & ~(1u << l)] += 1.0;
      }
    }
    const double m = std::popcount(b) - 0.5 * n;
    column[b] += m * (m + 1.0);
    for (Eigen::Index row = 0; row < dim; ++row)
      if (column[row] != complex<double>{0.0, 0.0})
        entries.emplace_back(row, static_cast<Eigen::Index>(b), column[row]);
  }

  Sparse j2(dim, dim);
  j2.setFromTriplets(entries.begin(), entries.end());
  j2.makeCompressed();
  return j2;
}

Eigen::SparseMatrix<std::complex<double>> total_spin_squared_full(int n_ions, int phonon_cutoff) {
  const Sparse j2 = total_spin_squared(n_ions);
  const int levels = phonon_cutoff + 1;
  const Eigen::Index dim = j2.rows() * levels;
  std::vector<Triplet> entries;
  entries.reserve(static_cast<std::size_t>(j2.nonZeros()) * levels);
  for (int col = 0; col < j2.outerSize(); ++col)
    for (Sparse::InnerIterator it(j2, col); it; ++it)
      for (int nu = 0; nu < levels; ++nu)
        entries.emplace_back(it.row() * levels + nu, it.col() * levels + nu, it.value());
  Sparse full(dim, dim);
  full.setFromTriplets(entries.begin(), entries.end());
  full.makeCompressed();
  return full;
}

Eigen::VectorXcd symmetric_internal_state(int n_ions, int n_excitations) {
  if (n_excitations < 0 || n_excitations > n_ions)
    throw std::invalid_argument("symmetric_internal_state: excitation number out of range");
  const Eigen::Index dim = Eigen::Index{1} << n_ions;
  Eigen::VectorXcd state = Eigen::VectorXcd::Zero(dim);
  const double amp = 1.0 / std::sqrt(binomial(n_ions, n_excitations));
  for (std::uint32_t b = 0; b < static_cast<std::uint32_t>(dim); ++b)
    if (std::popcount(b) == n_excitations) state[b] = amp;
  return state;
}

SymmetryReport symmetry_spectrum_check(int n_ions) {
  if (n_ions < 1 || n_ions > 10)
    throw std::invalid_argument("symmetry_spectrum_check: supported up to 10 ions");
  const int n = n_ions;
  const Sparse j2 = total_spin_squared(n);

  SymmetryReport report;
  report.expected_j2_eigenvalue = (1.0 + 0.5 * n) * (0.5 * n);

  for (int exc = 0; exc <= n; ++exc) {
    const Eigen::VectorXcd w = symmetric_internal_state(n, exc);
    const double j2_dev =
        (j2 * w - report.expected_j2_eigenvalue * w).lpNorm<Eigen::Infinity>();
    report.max_j2_deviation = std::max(report.max_j2_deviation, j2_dev);

    // every swap S_kl must fix the state
    for (int k = 0; k < n; ++k) {
      for (int l = k + 1; l < n; ++l) {
        double swap_dev = 0.0;
        for (std::uint32_t b = 0; b < (1u << n); ++b) {
          const std::uint32_t bk = (b >> k) & 1u;
          const std::uint32_t bl = (b >> l) & 1u;
          std::uint32_t swapped = b;
          if (bk != bl) swapped = b ^ ((1u << k) | (1u << l));
          swap_dev = std::max(swap_dev, std::abs(w[swapped] - w[b]));
        }
        report.max_swap_deviation = std::max(report.max_swap_deviation, swap_dev);
      }
    }
  }
  return report;
}

}  // namespace ionpulse::oracle
