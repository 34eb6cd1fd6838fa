// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cmath>
#include <stdexcept>

namespace ionpulse {

/// Duration estimate for a composite sequence at the conservative coupling
/// g = trap_frequency / 10 (keeps spectator motional modes quiet).
struct TimingReport {
  double total_area = 0.0;   // units of pi
  double coupling_g = 0.0;   // rad/s
  double duration_us = 0.0;  // total_area * pi / g
  double pi_pulse_us = 0.0;  // pi / g
};

inline TimingReport timing_report(double total_area, double trap_frequency) {
  if (!(trap_frequency > 0.0))
    throw std::invalid_argument("timing_report: trap_frequency must be > 0");
  if (!(total_area >= 0.0))
    throw std::invalid_argument("timing_report: total_area must be >= 0");
  TimingReport report;
  report.total_area = total_area;
  report.coupling_g = trap_frequency / 10.0;
  report.duration_us = total_area * M_PI / report.coupling_g * 1e6;
  report.pi_pulse_us = M_PI / report.coupling_g * 1e6;
  return report;
}

}  // namespace ionpulse
