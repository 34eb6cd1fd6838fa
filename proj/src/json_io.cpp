// SPDX-License-Identifier: Apache-2.0
#include "ionpulse/json_io.hpp"

#include <cmath>
#include <fstream>
#include <ostream>

namespace ionpulse::io {

using nlohmann::json;

namespace {

json load_json(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path.string());
  try {
    return json::parse(in);
  } catch (const json::parse_error& err) {
    throw ParseError(path.string() + ": " + err.what());
  }
}

void write_json(const std::filesystem::path& path, const json& j) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << j.dump(2) << '\n';
}

template <typename T>
T field(const json& j, const char* key) {
  if (!j.contains(key)) throw ParseError(std::string("missing field '") + key + "'");
  try {
    return j.at(key).get<T>();
  } catch (const json::exception& err) {
    throw ParseError(std::string("field '") + key + "': " + err.what());
  }
}

json system_to_json(const SystemConfig& system) {
  return json{{"n_ions", system.n_ions},
              {"lamb_dicke", system.lamb_dicke},
              {"trap_frequency", system.trap_frequency}};
}

SystemConfig system_from_json(const json& j) {
  SystemConfig system;
  system.n_ions = field<int>(j, "n_ions");
  system.lamb_dicke = j.value("lamb_dicke", 0.0);
  system.trap_frequency = j.value("trap_frequency", 4.0e6);
  try {
    system.validate();
  } catch (const std::invalid_argument& err) {
    throw ParseError(std::string("system: ") + err.what());
  }
  return system;
}

PulseSequence pulses_from_json(const json& j) {
  if (!j.is_array() || j.empty())
    throw ParseError("'pulses' must be a non-empty array");
  std::vector<Pulse> pulses;
  pulses.reserve(j.size());
  for (std::size_t k = 0; k < j.size(); ++k) {
    const json& p = j[k];
    try {
      pulses.emplace_back(field<double>(p, "area"), field<double>(p, "phase"));
    } catch (const std::invalid_argument& err) {
      throw ParseError("pulse " + std::to_string(k + 1) + ": " + err.what());
    }
  }
  return PulseSequence(std::move(pulses));
}

json pulses_to_json(const PulseSequence& pulses) {
  json arr = json::array();
  for (const auto& p : pulses) arr.push_back({{"area", p.area()}, {"phase", p.phase()}});
  return arr;
}

}  // namespace

nlohmann::json sequence_to_json(const SystemConfig& system, const PulseSequence& pulses) {
  return json{{"system", system_to_json(system)}, {"pulses", pulses_to_json(pulses)}};
}

SequenceFile sequence_from_json(const json& j) {
  if (!j.contains("system")) throw ParseError("missing field 'system'");
  if (!j.contains("pulses")) throw ParseError("missing field 'pulses'");
  return SequenceFile{system_from_json(j.at("system")), pulses_from_json(j.at("pulses"))};
}

SequenceFile load_sequence(const std::filesystem::path& path) {
  try {
    return sequence_from_json(load_json(path));
  } catch (const ParseError& err) {
    throw ParseError(path.string() + ": " + err.what());
  }
}

void save_sequence(const std::filesystem::path& path, const SystemConfig& system,
                   const PulseSequence& pulses) {
  write_json(path, sequence_to_json(system, pulses));
}

LoadedTarget load_custom_target(const std::filesystem::path& path, int n_ions) {
  const json j = load_json(path);
  if (!j.contains("amplitudes"))
    throw ParseError(path.string() + ": missing field 'amplitudes'");
  const json& arr = j.at("amplitudes");
  if (!arr.is_array() || arr.size() != static_cast<std::size_t>(n_ions + 1))
    throw ParseError(path.string() + ": 'amplitudes' must list N+1 = " +
                     std::to_string(n_ions + 1) + " entries");

  Eigen::VectorXcd amps(n_ions + 1);
  for (std::size_t k = 0; k < arr.size(); ++k) {
    const json& entry = arr[k];
    if (entry.is_number()) {
      amps[k] = entry.get<double>();
    } else if (entry.is_array() && entry.size() == 2) {
      amps[k] = std::complex<double>(entry[0].get<double>(), entry[1].get<double>());
    } else {
      throw ParseError(path.string() + ": amplitude " + std::to_string(k) +
                       " must be a number or [re, im]");
    }
  }

  LoadedTarget loaded;
  const double norm = amps.norm();
  loaded.norm_defect = std::abs(norm - 1.0);
  if (loaded.norm_defect > 1e-3)
    throw ParseError(path.string() + ": amplitudes are not normalized (|norm - 1| = " +
                     std::to_string(loaded.norm_defect) + ")");
  if (loaded.norm_defect > 1e-9) {
    amps /= norm;
    loaded.renormalized = true;
  }
  loaded.target = TargetSpec{std::move(amps)};
  return loaded;
}

std::string fidelity_mode_name(FidelityMode mode) {
  return mode == FidelityMode::phase_maximized ? "phase_maximized" : "fixed_phase";
}

namespace {

FidelityMode fidelity_mode_from_name(const std::string& name) {
  if (name == "phase_maximized") return FidelityMode::phase_maximized;
  if (name == "fixed_phase") return FidelityMode::fixed_phase;
  throw ParseError("unknown fidelity mode '" + name + "'");
}

}  // namespace

void save_solutions(const std::filesystem::path& path, const SystemConfig& system,
                    const std::string& target_description, const optim::SearchConfig& search,
                    FidelityMode mode, const optim::SynthesisResult& result) {
  json solutions = json::array();
  for (const auto& s : result.solutions) {
    solutions.push_back({{"pulses", pulses_to_json(s.sequence)},
                         {"fidelity", s.fidelity},
                         {"total_area", s.total_area},
                         {"restart_index", s.restart_index},
                         {"iterations", s.iterations}});
  }
  const json j{
      {"system", system_to_json(system)},
      {"target", target_description},
      {"fidelity_mode", fidelity_mode_name(mode)},
      {"search",
       {{"n_restarts", search.n_restarts},
        {"fidelity_goal", search.fidelity_goal},
        {"max_iterations", search.max_iterations},
        {"rng_seed", search.rng_seed}}},
      {"goal_met", result.goal_met},
      {"solutions", solutions},
  };
  write_json(path, j);
}

SolutionsFile load_solutions(const std::filesystem::path& path) {
  const json j = load_json(path);
  SolutionsFile file;
  file.system = system_from_json(j.at("system"));
  file.target_description = j.value("target", "");
  file.fidelity_mode = fidelity_mode_from_name(j.value("fidelity_mode", "fixed_phase"));
  file.goal_met = field<bool>(j, "goal_met");
  for (const json& s : j.at("solutions")) {
    file.solutions.push_back(optim::Solution{pulses_from_json(s.at("pulses")),
                                             field<double>(s, "fidelity"),
                                             field<double>(s, "total_area"),
                                             s.value("restart_index", 0),
                                             s.value("iterations", 0)});
  }
  return file;
}

void write_robustness_csv(std::ostream& out, const robustness::RobustnessCurve& curve) {
  out << "sigma,mean_fidelity,std_fidelity,min_fidelity\n";
  const auto previous = out.precision(12);
  for (const auto& p : curve.points)
    out << p.sigma << ',' << p.mean_fidelity << ',' << p.std_fidelity << ',' << p.min_fidelity
        << '\n';
  out.precision(previous);
}

}  // namespace ionpulse::io
