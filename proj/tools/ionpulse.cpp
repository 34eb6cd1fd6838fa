// SPDX-License-Identifier: Apache-2.0
//
// Command-line front end: synthesize composite sequences for Dicke/NOON
// targets, replay and score stored sequences, cross-check the ladder model
// against the full-space simulation, run noise sweeps, and estimate
// durations.

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "ionpulse/chain.hpp"
#include "ionpulse/json_io.hpp"
#include "ionpulse/optim.hpp"
#include "ionpulse/oracle.hpp"
#include "ionpulse/robustness.hpp"
#include "ionpulse/tables.hpp"
#include "ionpulse/timing.hpp"

namespace {

using namespace ionpulse;

enum ExitCode : int {
  kOk = 0,
  kTargetNotAchieved = 1,
  kInputError = 2,
  kNumericalError = 3,
};

struct TargetChoice {
  enum class Kind { dicke, noon, custom } kind = Kind::dicke;
  std::optional<int> dicke_n;  // defaults to floor(N/2)
  std::string custom_path;

  static TargetChoice parse(const std::string& text) {
    TargetChoice choice;
    if (text == "noon") {
      choice.kind = Kind::noon;
    } else if (text == "dicke") {
      choice.kind = Kind::dicke;
    } else if (text.rfind("dicke:", 0) == 0) {
      choice.kind = Kind::dicke;
      choice.dicke_n = std::stoi(text.substr(6));
    } else if (text.rfind("custom:", 0) == 0) {
      choice.kind = Kind::custom;
      choice.custom_path = text.substr(7);
    } else {
      throw io::ParseError("unknown target '" + text + "' (use dicke[:n], noon, custom:<file>)");
    }
    return choice;
  }

  std::string describe(int n_ions) const {
    switch (kind) {
      case Kind::noon:
        return "noon";
      case Kind::custom:
        return "custom:" + custom_path;
      case Kind::dicke:
        break;
    }
    return "dicke:" + std::to_string(dicke_n.value_or(tables::default_dicke_excitation(n_ions)));
  }

  TargetSpec resolve(int n_ions, bool* renormalized = nullptr) const {
    switch (kind) {
      case Kind::noon:
        return noon_target(n_ions);
      case Kind::custom: {
        const io::LoadedTarget loaded = io::load_custom_target(custom_path, n_ions);
        if (loaded.renormalized) {
          if (renormalized) *renormalized = true;
          std::cerr << "warning: custom target renormalized (|norm - 1| = "
                    << loaded.norm_defect << ")\n";
        }
        return loaded.target;
      }
      case Kind::dicke:
        break;
    }
    return dicke_target(n_ions, dicke_n.value_or(tables::default_dicke_excitation(n_ions)));
  }
};

// Sequence input shared by replay/verify/robustness/timing: a JSON file
// (sequence or solutions format) or a built-in published row.
struct SequenceSource {
  std::string file;
  std::string paper_row;

  bool provided() const { return !file.empty() || !paper_row.empty(); }

  struct Resolved {
    SystemConfig system;
    PulseSequence pulses;
    std::optional<tables::StateKind> row_kind;
  };

  Resolved resolve() const {
    if (!file.empty() && !paper_row.empty())
      throw io::ParseError("give either --sequence or --paper-row, not both");
    if (!paper_row.empty()) {
      const auto colon = paper_row.find(':');
      if (colon == std::string::npos)
        throw io::ParseError("--paper-row expects kind:N, e.g. dicke:4 or noon:6");
      const std::string kind_text = paper_row.substr(0, colon);
      tables::StateKind kind;
      if (kind_text == "dicke") {
        kind = tables::StateKind::dicke;
      } else if (kind_text == "noon") {
        kind = tables::StateKind::noon;
      } else {
        throw io::ParseError("--paper-row kind must be dicke or noon");
      }
      const int n = std::stoi(paper_row.substr(colon + 1));
      const auto row = tables::find_row(kind, n);
      if (!row)
        throw io::ParseError("no built-in " + kind_text + " row for N = " + std::to_string(n));
      SystemConfig system;
      system.n_ions = n;
      return Resolved{system, row->sequence, kind};
    }

    // accept either a sequence file or a solutions file (best solution)
    std::ifstream in(file);
    if (!in) throw io::ParseError("cannot open " + file);
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(in);
    } catch (const nlohmann::json::parse_error& err) {
      throw io::ParseError(file + ": " + err.what());
    }
    if (j.contains("solutions")) {
      const io::SolutionsFile solutions = io::load_solutions(file);
      if (solutions.solutions.empty())
        throw io::ParseError(file + ": empty solutions file");
      return Resolved{solutions.system, solutions.solutions.front().sequence, std::nullopt};
    }
    const io::SequenceFile seq = io::sequence_from_json(j);
    return Resolved{seq.system, seq.pulses, std::nullopt};
  }
};

std::string sequence_table_line(const PulseSequence& seq) {
  std::ostringstream line;
  line << '(';
  bool first = true;
  char buffer[64];
  for (const auto& p : seq) {
    if (!first) line << "; ";
    std::snprintf(buffer, sizeof(buffer), "%.3f, %.3f", p.area(), p.phase());
    line << buffer;
    first = false;
  }
  line << ')';
  return line.str();
}

FidelityMode mode_for(const TargetChoice& target, bool fixed_noon_phase) {
  if (target.kind == TargetChoice::Kind::noon && !fixed_noon_phase)
    return FidelityMode::phase_maximized;
  return FidelityMode::fixed_phase;
}

int cmd_synthesize(const SystemConfig& system, const TargetChoice& target,
                   optim::SearchConfig search, bool fixed_noon_phase,
                   const std::string& out_path) {
  const TargetSpec spec = target.resolve(system.n_ions);
  const FidelityMode mode = mode_for(target, fixed_noon_phase);
  const auto result = optim::synthesize(system, spec, search, mode);

  const optim::Solution& best = result.best();
  std::cout << "target " << target.describe(system.n_ions) << ", N = " << system.n_ions
            << ", eta = " << system.lamb_dicke << ", restarts = " << search.n_restarts
            << ", seed = " << search.rng_seed << "\n";
  if (!result.goal_met)
    std::cout << "goal " << search.fidelity_goal
              << " not reached; best attempt below (flagged in the output file)\n";
  char line[128];
  std::snprintf(line, sizeof(line), "best: A_tot = %.3f, fidelity = %.6f%s", best.total_area,
                best.fidelity,
                mode == FidelityMode::phase_maximized ? " (phase-maximized)" : "");
  std::cout << line << "\n  " << sequence_table_line(best.sequence) << "\n";
  std::cout << result.solutions.size() << " solution(s)";

  if (!out_path.empty()) {
    io::save_solutions(out_path, system, target.describe(system.n_ions), search, mode, result);
    std::cout << " written to " << out_path;
  }
  std::cout << "\n";
  return result.goal_met ? kOk : kTargetNotAchieved;
}

int cmd_replay(const SequenceSource& source, std::optional<TargetChoice> target,
               double eta_override, bool has_eta, const std::string& out_path) {
  auto resolved = source.resolve();
  if (has_eta) resolved.system.lamb_dicke = eta_override;

  if (!target) {
    TargetChoice inferred;
    inferred.kind = (resolved.row_kind && *resolved.row_kind == tables::StateKind::noon)
                        ? TargetChoice::Kind::noon
                        : TargetChoice::Kind::dicke;
    target = inferred;
  }
  const TargetSpec spec = target->resolve(resolved.system.n_ions);

  const ChainModel model(resolved.system);
  const Eigen::VectorXcd state = model.evolve_ground(resolved.pulses);
  const double fixed = ChainModel::overlap_fidelity(spec, state, FidelityMode::fixed_phase);
  const double maximized =
      ChainModel::overlap_fidelity(spec, state, FidelityMode::phase_maximized);

  std::cout << "sequence: " << resolved.pulses.size() << " pulses, A_tot = "
            << resolved.pulses.total_area() << "\n"
            << "target: " << target->describe(resolved.system.n_ions) << "\n";
  char buffer[96];
  std::snprintf(buffer, sizeof(buffer), "fidelity: %.9f", fixed);
  std::cout << buffer << "\n";
  if (target->kind == TargetChoice::Kind::noon) {
    std::snprintf(buffer, sizeof(buffer), "fidelity (phase-maximized): %.9f", maximized);
    std::cout << buffer << "\n";
  }
  std::cout << "populations:";
  for (Eigen::Index n = 0; n < state.size(); ++n) {
    std::snprintf(buffer, sizeof(buffer), " %.6f", std::norm(state[n]));
    std::cout << buffer;
  }
  std::cout << "\n";

  if (!out_path.empty()) {
    nlohmann::json populations = nlohmann::json::array();
    for (Eigen::Index n = 0; n < state.size(); ++n) populations.push_back(std::norm(state[n]));
    nlohmann::json j{{"system", {{"n_ions", resolved.system.n_ions},
                                 {"lamb_dicke", resolved.system.lamb_dicke}}},
                     {"target", target->describe(resolved.system.n_ions)},
                     {"total_area", resolved.pulses.total_area()},
                     {"fidelity", fixed},
                     {"fidelity_phase_maximized", maximized},
                     {"populations", populations}};
    std::ofstream out(out_path);
    out << j.dump(2) << '\n';
  }
  return kOk;
}

int cmd_verify(const SequenceSource& source, double eta_override, bool has_eta,
               int phonon_cutoff, const std::string& out_path) {
  auto resolved = source.resolve();
  if (has_eta) resolved.system.lamb_dicke = eta_override;
  const int cutoff =
      phonon_cutoff > 0 ? phonon_cutoff : oracle::default_phonon_cutoff(resolved.system.n_ions);

  const auto factorization =
      oracle::verify_factorization(resolved.system, resolved.pulses, cutoff);
  const auto symmetry = oracle::symmetry_spectrum_check(resolved.system.n_ions);

  const bool pass = factorization.max_amplitude_discrepancy < 1e-8 &&
                    factorization.max_leakage < 1e-9;
  std::printf("factorization: max amplitude discrepancy %.3e, max leakage %.3e\n",
              factorization.max_amplitude_discrepancy, factorization.max_leakage);
  std::printf("symmetry: J^2 eigenvalue %.6f, max deviation %.3e, max swap deviation %.3e\n",
              symmetry.expected_j2_eigenvalue, symmetry.max_j2_deviation,
              symmetry.max_swap_deviation);
  std::printf("verdict: %s\n", pass ? "PASS" : "FAIL");

  if (!out_path.empty()) {
    nlohmann::json j{{"n_ions", resolved.system.n_ions},
                     {"lamb_dicke", resolved.system.lamb_dicke},
                     {"phonon_cutoff", cutoff},
                     {"max_amplitude_discrepancy", factorization.max_amplitude_discrepancy},
                     {"max_leakage", factorization.max_leakage},
                     {"j2_eigenvalue", symmetry.expected_j2_eigenvalue},
                     {"max_j2_deviation", symmetry.max_j2_deviation},
                     {"max_swap_deviation", symmetry.max_swap_deviation},
                     {"pass", pass}};
    std::ofstream out(out_path);
    out << j.dump(2) << '\n';
  }
  return pass ? kOk : kNumericalError;
}

int cmd_robustness(const SequenceSource& source, std::optional<TargetChoice> target,
                   std::vector<double> sigmas, robustness::NoiseModel model,
                   bool fixed_noon_phase, const std::string& out_path) {
  auto resolved = source.resolve();
  if (!target) {
    TargetChoice inferred;
    inferred.kind = (resolved.row_kind && *resolved.row_kind == tables::StateKind::noon)
                        ? TargetChoice::Kind::noon
                        : TargetChoice::Kind::dicke;
    target = inferred;
  }
  const TargetSpec spec = target->resolve(resolved.system.n_ions);
  const FidelityMode mode = mode_for(*target, fixed_noon_phase);
  if (sigmas.empty()) sigmas = {0.0, 0.005, 0.01, 0.02};

  auto curve = robustness::fidelity_vs_sigma(resolved.system, resolved.pulses, spec,
                                             std::move(sigmas), model, mode);
  curve.sequence_id = !source.paper_row.empty() ? "paper-row:" + source.paper_row : source.file;
  curve.target_id = target->describe(resolved.system.n_ions);
  if (out_path.empty()) {
    io::write_robustness_csv(std::cout, curve);
  } else {
    std::ofstream out(out_path);
    if (!out) throw std::runtime_error("cannot write " + out_path);
    io::write_robustness_csv(out, curve);
    std::cout << "curve written to " << out_path << "\n";
  }
  return kOk;
}

int cmd_timing(const SequenceSource& source, double total_area_flag, double trap_frequency) {
  double total_area = total_area_flag;
  std::optional<int> n_ions;
  if (source.provided()) {
    const auto resolved = source.resolve();
    total_area = resolved.pulses.total_area();
    n_ions = resolved.system.n_ions;
    if (trap_frequency <= 0.0) trap_frequency = resolved.system.trap_frequency;
  }
  if (trap_frequency <= 0.0) trap_frequency = 4.0e6;
  if (total_area < 0.0)
    throw io::ParseError("timing needs --sequence, --paper-row, or --total-area");

  const TimingReport report = timing_report(total_area, trap_frequency);
  std::printf("A_tot = %.3f pi, g = %.6g rad/s\n", report.total_area, report.coupling_g);
  std::printf("T_tot = %.3f us, T_pi = %.3f us\n", report.duration_us, report.pi_pulse_us);
  if (n_ions) {
    std::printf("asymptotic bounds: Dicke (N/2) T_pi = %.3f us, NOON (N/3) T_pi = %.3f us\n",
                (*n_ions / 2.0) * report.pi_pulse_us, (*n_ions / 3.0) * report.pi_pulse_us);
  }
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Composite-pulse synthesis for symmetric entangled states of trapped ions"};
  app.require_subcommand(1);
  std::function<int()> run;

  // --- synthesize ---
  auto* synth = app.add_subcommand("synthesize", "search for a pulse sequence hitting a target");
  {
    struct JobSpec {
      int ions = 0;
      double eta = 0.0;
      double trap_frequency = 4.0e6;
      std::string target = "dicke";
      int restarts = 0;  // 0 = size-based default
      std::uint64_t seed = 0;
      double goal = 0.999;
      int max_iterations = 500;
      double area_max = 2.0;
      int threads = 0;
      bool fixed_noon_phase = false;
      std::string out = "solutions.json";
    };
    auto job = std::make_shared<JobSpec>();
    synth->add_option("--ions", job->ions, "number of ions N")->required();
    synth->add_option("--eta", job->eta, "Lamb-Dicke parameter (default 0)");
    synth->add_option("--trap-frequency", job->trap_frequency, "trap frequency, rad/s");
    synth->add_option("--target", job->target, "dicke[:n] | noon | custom:<file>");
    synth->add_option("--restarts", job->restarts, "Monte-Carlo restarts (default 500, 2000 for N>6)");
    synth->add_option("--seed", job->seed, "rng seed");
    synth->add_option("--fidelity-goal", job->goal, "qualifying fidelity (default 0.999)");
    synth->add_option("--max-iterations", job->max_iterations, "iteration cap per restart");
    synth->add_option("--area-max", job->area_max,
                      "per-pulse area box in units of pi (default 2; shrink to hunt "
                      "minimal-area solutions)");
    synth->add_option("--threads", job->threads, "worker threads (default: hardware)");
    synth->add_flag("--fixed-noon-phase", job->fixed_noon_phase,
                    "score NOON targets at fixed relative phase");
    synth->add_option("--out", job->out, "solutions file (default solutions.json)");
    synth->callback([job, &run] {
      run = [job] {
        SystemConfig system{job->ions, job->eta, job->trap_frequency};
        system.validate();
        optim::SearchConfig search = optim::SearchConfig::for_ions(job->ions);
        if (job->restarts > 0) search.n_restarts = job->restarts;
        search.fidelity_goal = job->goal;
        search.max_iterations = job->max_iterations;
        search.area_max = job->area_max;
        search.rng_seed = job->seed;
        search.threads = job->threads;
        return cmd_synthesize(system, TargetChoice::parse(job->target), search,
                              job->fixed_noon_phase, job->out);
      };
    });
  }

  // --- replay ---
  auto* replay = app.add_subcommand("replay", "evaluate a stored or built-in sequence");
  {
    auto source = std::make_shared<SequenceSource>();
    auto target_text = std::make_shared<std::string>();
    auto eta = std::make_shared<double>(0.0);
    auto out = std::make_shared<std::string>();
    replay->add_option("--sequence", source->file, "sequence or solutions JSON file");
    replay->add_option("--paper-row", source->paper_row, "built-in row, e.g. dicke:4");
    auto* eta_opt = replay->add_option("--eta", *eta, "override Lamb-Dicke parameter");
    replay->add_option("--target", *target_text, "dicke[:n] | noon | custom:<file>");
    replay->add_option("--out", *out, "write a JSON report");
    replay->callback([source, target_text, eta, eta_opt, out, &run] {
      run = [=] {
        if (!source->provided()) throw io::ParseError("replay needs --sequence or --paper-row");
        std::optional<TargetChoice> target;
        if (!target_text->empty()) target = TargetChoice::parse(*target_text);
        return cmd_replay(*source, target, *eta, eta_opt->count() > 0, *out);
      };
    });
  }

  // --- verify ---
  auto* verify = app.add_subcommand("verify",
                                    "cross-check the ladder model on the full product space");
  {
    auto source = std::make_shared<SequenceSource>();
    auto eta = std::make_shared<double>(0.0);
    auto cutoff = std::make_shared<int>(0);
    auto out = std::make_shared<std::string>();
    verify->add_option("--sequence", source->file, "sequence or solutions JSON file");
    verify->add_option("--paper-row", source->paper_row, "built-in row, e.g. dicke:4");
    auto* eta_opt = verify->add_option("--eta", *eta, "override Lamb-Dicke parameter");
    verify->add_option("--phonon-cutoff", *cutoff, "Fock truncation (default N+4)");
    verify->add_option("--out", *out, "write a JSON report");
    verify->callback([source, eta, eta_opt, cutoff, out, &run] {
      run = [=] {
        if (!source->provided()) throw io::ParseError("verify needs --sequence or --paper-row");
        return cmd_verify(*source, *eta, eta_opt->count() > 0, *cutoff, *out);
      };
    });
  }

  // --- robustness ---
  auto* robust = app.add_subcommand("robustness", "fidelity vs control-parameter noise");
  {
    auto source = std::make_shared<SequenceSource>();
    auto target_text = std::make_shared<std::string>();
    auto sigmas = std::make_shared<std::vector<double>>();
    auto model = std::make_shared<robustness::NoiseModel>();
    auto mode_text = std::make_shared<std::string>("relative_area_absolute_phase");
    auto fixed_noon = std::make_shared<bool>(false);
    auto out = std::make_shared<std::string>();
    robust->add_option("--sequence", source->file, "sequence or solutions JSON file");
    robust->add_option("--paper-row", source->paper_row, "built-in row, e.g. dicke:4");
    robust->add_option("--target", *target_text, "dicke[:n] | noon | custom:<file>");
    robust->add_option("--sigma", *sigmas,
                       "comma-separated noise scales (default 0,0.005,0.01,0.02)")
        ->delimiter(',');
    robust->add_option("--trials", model->trials, "trials per sigma (default 1000)");
    robust->add_option("--seed", model->rng_seed, "rng seed");
    robust->add_option("--mode", *mode_text,
                       "relative_area_absolute_phase | relative_both");
    robust->add_flag("--fixed-noon-phase", *fixed_noon,
                     "score NOON targets at fixed relative phase");
    robust->add_option("--out", *out, "CSV output file (default stdout)");
    robust->callback([source, target_text, sigmas, model, mode_text, fixed_noon, out, &run] {
      run = [=] {
        if (!source->provided())
          throw io::ParseError("robustness needs --sequence or --paper-row");
        if (*mode_text == "relative_both") {
          model->mode = robustness::NoiseMode::relative_both;
        } else if (*mode_text != "relative_area_absolute_phase") {
          throw io::ParseError("unknown noise mode '" + *mode_text + "'");
        }
        std::optional<TargetChoice> target;
        if (!target_text->empty()) target = TargetChoice::parse(*target_text);
        return cmd_robustness(*source, target, *sigmas, *model, *fixed_noon, *out);
      };
    });
  }

  // --- timing ---
  auto* timing = app.add_subcommand("timing", "duration estimate at g = trap_frequency/10");
  {
    auto source = std::make_shared<SequenceSource>();
    auto total_area = std::make_shared<double>(-1.0);
    auto trap = std::make_shared<double>(0.0);
    timing->add_option("--sequence", source->file, "sequence or solutions JSON file");
    timing->add_option("--paper-row", source->paper_row, "built-in row, e.g. dicke:4");
    timing->add_option("--total-area", *total_area, "total area in units of pi");
    timing->add_option("--trap-frequency", *trap, "trap frequency, rad/s (default 4e6)");
    timing->callback([source, total_area, trap, &run] {
      run = [=] { return cmd_timing(*source, *total_area, *trap); };
    });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& help) {
    return app.exit(help);
  } catch (const CLI::ParseError& err) {
    app.exit(err);
    return kInputError;
  }

  try {
    return run();
  } catch (const io::ParseError& err) {
    std::cerr << "input error: " << err.what() << "\n";
    return kInputError;
  } catch (const std::invalid_argument& err) {
    std::cerr << "input error: " << err.what() << "\n";
    return kInputError;
  } catch (const oracle::CutoffError& err) {
    std::cerr << "cutoff error: " << err.what() << "\n";
    return kNumericalError;
  } catch (const std::exception& err) {
    std::cerr << "error: " << err.what() << "\n";
    return kNumericalError;
  }
}
