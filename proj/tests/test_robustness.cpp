// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <cmath>

#include "ionpulse/chain.hpp"
#include "ionpulse/robustness.hpp"
#include "ionpulse/tables.hpp"

using namespace ionpulse;
using robustness::NoiseModel;

namespace {

SystemConfig config_for(int n_ions) {
  SystemConfig c;
  c.n_ions = n_ions;
  return c;
}

}  // namespace

TEST_CASE("perturb") {
  const auto row = tables::find_row(tables::StateKind::dicke, 3);
  REQUIRE(row.has_value());
  const PulseSequence& seq = row->sequence;

  SUBCASE("sigma zero returns the sequence unchanged") {
    NoiseModel model;
    model.sigma = 0.0;
    const PulseSequence noisy = robustness::perturb(seq, model, 17);
    for (std::size_t k = 0; k < seq.size(); ++k) {
      CHECK(noisy[k].area() == seq[k].area());
      CHECK(noisy[k].phase() == seq[k].phase());
    }
  }

  SUBCASE("identical trial keys give identical draws") {
    NoiseModel model;
    model.sigma = 0.01;
    model.rng_seed = 4;
    const PulseSequence a = robustness::perturb(seq, model, 6);
    const PulseSequence b = robustness::perturb(seq, model, 6);
    const PulseSequence c = robustness::perturb(seq, model, 7);
    bool any_difference = false;
    for (std::size_t k = 0; k < seq.size(); ++k) {
      CHECK(a[k].area() == b[k].area());
      CHECK(a[k].phase() == b[k].phase());
      any_difference |= a[k].area() != c[k].area();
    }
    CHECK(any_difference);
  }

  SUBCASE("sampler statistics match the declared model") {
    NoiseModel model;
    model.sigma = 0.01;
    model.rng_seed = 12;
    const int trials = 20000;
    double sum = 0.0, sum_sq = 0.0;
    for (int t = 0; t < trials; ++t) {
      const PulseSequence noisy = robustness::perturb(seq, model, t);
      const double rel = (noisy[0].area() - seq[0].area()) / seq[0].area();
      sum += rel;
      sum_sq += rel * rel;
    }
    const double mean = sum / trials;
    const double std_dev = std::sqrt(sum_sq / trials - mean * mean);
    CHECK(std::abs(mean) < 3.0 * model.sigma / std::sqrt(trials));
    CHECK(std_dev == doctest::Approx(model.sigma).epsilon(0.05));
  }

  SUBCASE("negative draws clamp the area at zero") {
    NoiseModel model;
    model.sigma = 5.0;  // huge noise to force negatives
    model.rng_seed = 3;
    for (int t = 0; t < 50; ++t) {
      const PulseSequence noisy = robustness::perturb(seq, model, t);
      for (const auto& p : noisy) CHECK(p.area() >= 0.0);
    }
  }
}

TEST_CASE("fidelity_vs_sigma") {
  const auto row = tables::find_row(tables::StateKind::dicke, 3);
  REQUIRE(row.has_value());
  const SystemConfig config = config_for(3);
  const TargetSpec target = dicke_target(3, 1);

  SUBCASE("sigma = 0 reproduces the plain fidelity exactly") {
    NoiseModel model;
    model.trials = 500;
    const auto curve =
        robustness::fidelity_vs_sigma(config, row->sequence, target, {0.0}, model);
    REQUIRE(curve.points.size() == 1);
    const double exact = fidelity(config, row->sequence, target);
    CHECK(curve.points[0].mean_fidelity == exact);
    CHECK(curve.points[0].std_fidelity == 0.0);
    CHECK(curve.points[0].min_fidelity == exact);
  }

  SUBCASE("means are within [0,1], sorted by sigma, and reproducible") {
    NoiseModel model;
    model.trials = 400;
    model.rng_seed = 21;
    const std::vector<double> grid{0.02, 0.0, 0.01, 0.005};
    const auto curve =
        robustness::fidelity_vs_sigma(config, row->sequence, target, grid, model);
    const auto again =
        robustness::fidelity_vs_sigma(config, row->sequence, target, grid, model);
    REQUIRE(curve.points.size() == 4);
    for (std::size_t i = 0; i < curve.points.size(); ++i) {
      const auto& p = curve.points[i];
      CHECK(p.mean_fidelity >= 0.0);
      CHECK(p.mean_fidelity <= 1.0);
      CHECK(p.min_fidelity <= p.mean_fidelity);
      if (i > 0) CHECK(p.sigma > curve.points[i - 1].sigma);
      CHECK(p.mean_fidelity == again.points[i].mean_fidelity);  // bit-identical rerun
      CHECK(p.std_fidelity == again.points[i].std_fidelity);
      CHECK(p.min_fidelity == again.points[i].min_fidelity);
    }
  }

  SUBCASE("mean fidelity does not grow with sigma beyond Monte-Carlo error") {
    NoiseModel model;
    model.trials = 5000;
    model.rng_seed = 2;
    const auto curve = robustness::fidelity_vs_sigma(config, row->sequence, target,
                                                     {0.0, 0.005, 0.01, 0.02}, model);
    for (std::size_t i = 1; i < curve.points.size(); ++i) {
      const auto& lo = curve.points[i - 1];
      const auto& hi = curve.points[i];
      const double stderr_combined =
          std::sqrt((lo.std_fidelity * lo.std_fidelity + hi.std_fidelity * hi.std_fidelity) /
                    model.trials);
      CHECK(hi.mean_fidelity <= lo.mean_fidelity + 2.0 * stderr_combined);
    }
  }

  SUBCASE("published floors at one-percent noise") {
    NoiseModel model;
    model.trials = 1000;
    model.rng_seed = 7;
    const auto dicke6 = tables::find_row(tables::StateKind::dicke, 6);
    REQUIRE(dicke6.has_value());
    const auto curve6 = robustness::fidelity_vs_sigma(
        config_for(6), dicke6->sequence, dicke_target(6, 3), {0.01}, model);
    CHECK(curve6.points[0].mean_fidelity > 0.95);

    const auto noon4 = tables::find_row(tables::StateKind::noon, 4);
    REQUIRE(noon4.has_value());
    const auto curve4 = robustness::fidelity_vs_sigma(
        config_for(4), noon4->sequence, noon_target(4), {0.01}, model,
        FidelityMode::phase_maximized);
    CHECK(curve4.points[0].mean_fidelity > 0.95);
  }

  SUBCASE("relative-phase mode perturbs phases proportionally") {
    NoiseModel model;
    model.sigma = 0.01;
    model.mode = robustness::NoiseMode::relative_both;
    model.rng_seed = 9;
    // first pulse of the reference row has phase 0: relative noise keeps it 0
    const PulseSequence noisy = robustness::perturb(row->sequence, model, 0);
    CHECK(noisy[0].phase() == 0.0);
    CHECK(noisy[1].phase() != row->sequence[1].phase());
  }
}
