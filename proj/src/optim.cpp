// SPDX-License-Identifier: Apache-2.0
#include "ionpulse/optim.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <optional>
#include <thread>

namespace ionpulse::optim {

void SearchConfig::validate() const {
  if (n_restarts < 1) throw std::invalid_argument("SearchConfig: n_restarts must be >= 1");
  if (!(fidelity_goal > 0.0 && fidelity_goal <= 1.0))
    throw std::invalid_argument("SearchConfig: fidelity_goal must be in (0, 1]");
  if (max_iterations < 0)
    throw std::invalid_argument("SearchConfig: max_iterations must be >= 0");
  if (!(gradient_step > 0.0))
    throw std::invalid_argument("SearchConfig: gradient_step must be > 0");
  if (!(convergence_tol > 0.0))
    throw std::invalid_argument("SearchConfig: convergence_tol must be > 0");
  if (!(area_min >= 0.0) || !(area_max > area_min))
    throw std::invalid_argument("SearchConfig: need 0 <= area_min < area_max");
}

SearchConfig SearchConfig::for_ions(int n_ions) {
  SearchConfig search;
  search.n_restarts = n_ions <= 6 ? 500 : 2000;
  return search;
}

namespace {

// Fidelity as a function of the raw parameter vector. Evaluated without
// constructing Pulse objects so finite differences may probe slightly
// outside the area box.
double evaluate(const ChainModel& model, const TargetSpec& target,
                const Eigen::VectorXd& params, FidelityMode mode) {
  const int n = model.n_ions();
  Eigen::VectorXcd state = Eigen::VectorXcd::Zero(model.dim());
  state[0] = 1.0;
  model.apply_raw(params[0], 0.0, state);
  for (int k = 1; k < n; ++k) model.apply_raw(params[k], params[n + k - 1], state);
  return ChainModel::overlap_fidelity(target, state, mode);
}

Eigen::VectorXd clamp_areas(const ChainModel& model, Eigen::VectorXd params,
                            const SearchConfig& search) {
  for (int k = 0; k < model.n_ions(); ++k)
    params[k] = std::clamp(params[k], search.area_min, search.area_max);
  return params;
}

}  // namespace

Eigen::VectorXd random_start(int n_ions, const SearchConfig& search, Rng& rng) {
  Eigen::VectorXd params(2 * n_ions - 1);
  for (int k = 0; k < n_ions; ++k) params[k] = rng.uniform(search.area_min, search.area_max);
  for (int k = n_ions; k < 2 * n_ions - 1; ++k) params[k] = rng.uniform(0.0, 2.0);
  return params;
}

PulseSequence params_to_sequence(int n_ions, const Eigen::VectorXd& params) {
  if (params.size() != 2 * n_ions - 1)
    throw std::invalid_argument("params_to_sequence: expected 2N-1 parameters");
  std::vector<Pulse> pulses;
  pulses.reserve(n_ions);
  pulses.emplace_back(std::max(params[0], 0.0), 0.0);
  for (int k = 1; k < n_ions; ++k)
    pulses.emplace_back(std::max(params[k], 0.0), params[n_ions + k - 1]);
  return PulseSequence(std::move(pulses));
}

std::pair<double, Eigen::VectorXd> objective_gradient(const ChainModel& model,
                                                      const TargetSpec& target,
                                                      const Eigen::VectorXd& params,
                                                      double gradient_step, FidelityMode mode) {
  const double value = evaluate(model, target, params, mode);
  Eigen::VectorXd grad(params.size());
  Eigen::VectorXd probe = params;
  for (Eigen::Index i = 0; i < params.size(); ++i) {
    probe[i] = params[i] + gradient_step;
    const double hi = evaluate(model, target, probe, mode);
    probe[i] = params[i] - gradient_step;
    const double lo = evaluate(model, target, probe, mode);
    probe[i] = params[i];
    grad[i] = (hi - lo) / (2.0 * gradient_step);
  }
  return {value, grad};
}

Solution local_refine(const ChainModel& model, const TargetSpec& target,
                      const Eigen::VectorXd& start, const SearchConfig& search,
                      FidelityMode mode, int restart_index) {
  search.validate();
  const int n = model.n_ions();
  const Eigen::Index dim = 2 * n - 1;
  if (start.size() != dim)
    throw std::invalid_argument("local_refine: expected 2N-1 parameters");

  auto project = [&](Eigen::VectorXd x) { return clamp_areas(model, std::move(x), search); };

  Eigen::VectorXd x = project(start);
  auto [value, ascent] = objective_gradient(model, target, x, search.gradient_step, mode);
  if (!std::isfinite(value))
    throw std::runtime_error("local_refine: non-finite fidelity at the start point");
  Eigen::VectorXd grad = -ascent;  // minimize -F

  Eigen::MatrixXd hessian_inv = Eigen::MatrixXd::Identity(dim, dim);
  int iterations = 0;
  bool scaled = false;  // H0 rescaled to s'y/y'y once a step is accepted

  for (; iterations < search.max_iterations; ++iterations) {
    const double residual = (x - project(x - grad)).lpNorm<Eigen::Infinity>();
    if (residual < search.convergence_tol) break;

    bool steepest = false;
    Eigen::VectorXd direction = -(hessian_inv * grad);
    if (grad.dot(direction) > -1e-14) {
      hessian_inv.setIdentity();
      scaled = false;
      direction = -grad;
      steepest = true;
    }

    // Backtracking Armijo search on the projected step with quadratic
    // interpolation; only non-increasing steps are accepted.
    constexpr double kArmijo = 1e-4;
    const double slope = grad.dot(direction);
    double step_scale = 1.0;
    bool accepted = false;
    Eigen::VectorXd x_next;
    double value_next = value;
    for (int backtracks = 0; backtracks < 60; ++backtracks) {
      x_next = project(x + step_scale * direction);
      value_next = evaluate(model, target, x_next, mode);
      const double objective_change = -(value_next - value);
      if (objective_change <= kArmijo * std::min(grad.dot(x_next - x), 0.0)) {
        accepted = true;
        break;
      }
      const double denom = objective_change - step_scale * slope;
      double candidate = denom > 0.0 ? -0.5 * step_scale * step_scale * slope / denom
                                     : 0.5 * step_scale;
      step_scale = std::clamp(candidate, 0.1 * step_scale, 0.5 * step_scale);
    }
    if (!std::isfinite(value_next)) break;
    if (!accepted) {
      // a stale curvature model can poison the direction; retry once from
      // steepest descent and only then give up
      if (steepest) break;
      hessian_inv.setIdentity();
      scaled = false;
      continue;
    }

    const Eigen::VectorXd s = x_next - x;
    if (s.lpNorm<Eigen::Infinity>() == 0.0) {
      // direction fully clipped by the area box
      if (steepest) break;
      hessian_inv.setIdentity();
      scaled = false;
      continue;
    }

    auto [value_new, ascent_new] = objective_gradient(model, target, x_next,
                                                      search.gradient_step, mode);
    Eigen::VectorXd grad_next = -ascent_new;
    const Eigen::VectorXd y = grad_next - grad;
    const double sy = s.dot(y);
    if (sy > 1e-12 * s.norm() * y.norm()) {
      if (!scaled) {
        // size H0 to the measured curvature scale before the first update
        hessian_inv *= sy / y.squaredNorm();
        scaled = true;
      }
      const double rho = 1.0 / sy;
      const Eigen::VectorXd hy = hessian_inv * y;
      hessian_inv -= rho * (s * hy.transpose() + hy * s.transpose());
      hessian_inv += rho * rho * (y.dot(hy) + sy) * (s * s.transpose());
    }
    x = std::move(x_next);
    value = value_new;
    grad = std::move(grad_next);
  }

  PulseSequence sequence = params_to_sequence(n, x);
  Solution solution{sequence, model.fidelity(sequence, target, mode), sequence.total_area(),
                    restart_index, iterations};
  return solution;
}

SynthesisResult synthesize(const SystemConfig& config, const TargetSpec& target,
                           const SearchConfig& search, FidelityMode mode) {
  search.validate();
  const ChainModel model(config);
  if (target.amplitudes.size() != model.dim())
    throw std::invalid_argument("synthesize: target dimension does not match the chain");

  std::vector<std::optional<Solution>> slots(search.n_restarts);
  const int requested = search.threads > 0
                            ? search.threads
                            : static_cast<int>(std::thread::hardware_concurrency());
  const int n_threads = std::max(1, std::min(requested, search.n_restarts));

  std::atomic<int> cursor{0};
  auto worker = [&]() {
    for (;;) {
      const int index = cursor.fetch_add(1);
      if (index >= search.n_restarts) return;
      Rng rng(mix_seed(search.rng_seed, static_cast<std::uint64_t>(index)));
      const Eigen::VectorXd start = random_start(model.n_ions(), search, rng);
      slots[index] = local_refine(model, target, start, search, mode, index);
    }
  };

  if (n_threads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(n_threads);
    for (int t = 0; t < n_threads; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }

  std::vector<Solution> qualifying;
  std::optional<Solution> fallback;
  for (auto& slot : slots) {
    Solution& s = *slot;
    if (s.fidelity >= search.fidelity_goal) {
      qualifying.push_back(std::move(s));
    } else if (!fallback || s.fidelity > fallback->fidelity) {
      fallback = std::move(s);
    }
  }

  SynthesisResult result;
  if (qualifying.empty()) {
    result.goal_met = false;
    result.solutions.push_back(std::move(*fallback));
    return result;
  }

  // Strict-weak order on (area, restart); fidelity decides inside windows
  // of near-equal area afterwards, keeping the comparator transitive.
  std::sort(qualifying.begin(), qualifying.end(), [](const Solution& a, const Solution& b) {
    if (a.total_area != b.total_area) return a.total_area < b.total_area;
    return a.restart_index < b.restart_index;
  });
  constexpr double kAreaTie = 1e-6;
  std::size_t group_start = 0;
  for (std::size_t i = 1; i <= qualifying.size(); ++i) {
    if (i == qualifying.size() ||
        qualifying[i].total_area - qualifying[group_start].total_area > kAreaTie) {
      std::sort(qualifying.begin() + group_start, qualifying.begin() + i,
                [](const Solution& a, const Solution& b) {
                  if (a.fidelity != b.fidelity) return a.fidelity > b.fidelity;
                  return a.restart_index < b.restart_index;
                });
      group_start = i;
    }
  }

  result.goal_met = true;
  result.solutions = std::move(qualifying);
  return result;
}

}  // namespace ionpulse::optim
