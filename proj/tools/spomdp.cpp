// spomdp: generate, simulate, estimate, evaluate and sweep POMDP instances.
#include "spomdp/generator.hpp"
#include "spomdp/io.hpp"
#include "spomdp/pipeline.hpp"
#include "spomdp/sweep.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>

using namespace spomdp;
using io::Json;

namespace {

enum Exit { kOk = 0, kUsage = 1, kEstimation = 2, kIo = 3 };

struct EstimatorFlags {
  std::uint64_t seed = 0;
  double delta = 0.05;
  int states = 0;
  int restarts = 50;
  int sweeps = 100;
  double tol = 1e-10;
  std::optional<double> theta_override;
  std::optional<double> G_override;
  double Theta = 1.0;
  std::vector<double> constants{1.0, 1.0, 1.0};
  bool enforce = false;

  void attach(CLI::App* app, bool with_states = true) {
    app->add_option("--seed", seed, "Seed for power-iteration restarts");
    app->add_option("--delta", delta, "Confidence parameter in (0,1)")->capture_default_str();
    if (with_states) app->add_option("--states", states, "Number of hidden states X");
    app->add_option("--restarts", restarts, "Power-iteration restarts per component")->capture_default_str();
    app->add_option("--sweeps", sweeps, "Power-iteration sweeps per restart")->capture_default_str();
    app->add_option("--tol", tol, "Power-iteration convergence tolerance")->capture_default_str();
    app->add_option("--theta-override", theta_override, "Use this contraction coefficient");
    app->add_option("--G-override", G_override, "Use this geometric ergodicity constant");
    app->add_option("--Theta", Theta, "Constant of the sample-size condition")->capture_default_str();
    app->add_option("--constants", constants, "C_O C_R C_T")->expected(3);
    app->add_flag("--enforce-sample-condition", enforce,
                  "Fail actions whose sample count is below the threshold");
  }

  EstimatorOptions options() const {
    EstimatorOptions o;
    o.states = states;
    o.power.restarts = restarts;
    o.power.sweeps = sweeps;
    o.power.tol = tol;
    o.power.seed = seed;
    o.delta = delta;
    o.constants = {constants[0], constants[1], constants[2]};
    o.G_override = G_override;
    o.theta_override = theta_override;
    o.Theta = Theta;
    o.enforce_sample_condition = enforce;
    if (restarts < 1 || sweeps < 1 || !(tol > 0.0))
      throw ValidationError("restarts and sweeps must be positive, tol > 0");
    return o;
  }
};

void emit(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-")
    std::cout << text;
  else
    io::write_text_file(path, text);
}

std::vector<std::size_t> parse_lengths(const std::vector<std::string>& items) {
  std::vector<std::size_t> out;
  for (const std::string& s : items) {
    // "2^12" is accepted as shorthand.
    const auto caret = s.find('^');
    try {
      if (caret != std::string::npos) {
        const double base = std::stod(s.substr(0, caret));
        const double exp = std::stod(s.substr(caret + 1));
        out.push_back(static_cast<std::size_t>(std::llround(std::pow(base, exp))));
      } else {
        out.push_back(static_cast<std::size_t>(std::stoull(s)));
      }
    } catch (const std::logic_error&) {
      throw ValidationError("bad N value '" + s + "'");
    }
  }
  return out;
}

Json summary_json(const SweepSummary& s, const std::vector<std::size_t>& lengths) {
  auto fit = [](const SlopeFit& f) {
    Json j = {{"slope", std::isfinite(f.slope) ? Json(f.slope) : Json(nullptr)}};
    if (!f.note.empty()) j["note"] = f.note;
    return j;
  };
  auto means = [](const std::vector<double>& v) {
    Json a = Json::array();
    for (double x : v) a.push_back(std::isfinite(x) ? Json(x) : Json(nullptr));
    return a;
  };
  return {{"N", lengths},
          {"mean_max_err_O", means(s.mean_err_O)},
          {"mean_max_err_R", means(s.mean_err_R)},
          {"mean_max_err_T", means(s.mean_err_T)},
          {"slope_O", fit(s.slope_O)},
          {"slope_R", fit(s.slope_R)},
          {"slope_T", fit(s.slope_T)},
          {"comparable_seeds", s.comparable_seeds},
          {"decreasing_O", s.decreasing_O},
          {"decreasing_R", s.decreasing_R},
          {"decreasing_T", s.decreasing_T},
          {"failed_cells", s.failed_cells}};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Spectral learning of POMDP parameters from a single trajectory"};
  app.require_subcommand(1);

  // gen
  auto* gen = app.add_subcommand("gen", "Draw a random model and policy");
  GeneratorSpec gspec;
  std::string policy_kind = "uniform";
  std::uint64_t gen_seed = 0;
  std::string gen_model_out, gen_policy_out;
  bool fixture = false;
  gen->add_option("--X", gspec.X)->capture_default_str();
  gen->add_option("--Y", gspec.Y)->capture_default_str();
  gen->add_option("--A", gspec.A)->capture_default_str();
  gen->add_option("--R", gspec.R)->capture_default_str();
  gen->add_option("--d-O-floor", gspec.d_O_floor, "Minimum separability of O");
  gen->add_option("--sigma-O-floor", gspec.sigma_O_floor, "Minimum X-th singular value of O");
  gen->add_option("--transition-mix", gspec.transition_mix)->capture_default_str();
  gen->add_option("--max-attempts", gspec.max_attempts)->capture_default_str();
  gen->add_option("--policy", policy_kind, "uniform | random")->check(CLI::IsMember({"uniform", "random"}));
  gen->add_option("--pi-min", gspec.policy.pi_min, "Entry floor of a random policy");
  gen->add_flag("--fixture", fixture, "Use the standard X=2,Y=4,A=2,R=2 fixture settings");
  gen->add_option("--seed", gen_seed);
  gen->add_option("--out-model", gen_model_out)->required();
  gen->add_option("--out-policy", gen_policy_out)->required();

  // simulate
  auto* sim = app.add_subcommand("simulate", "Simulate a trajectory");
  std::string sim_model, sim_policy, sim_out;
  SimulationOptions sopts;
  bool stationary_start = false;
  sim->add_option("--model", sim_model)->required();
  sim->add_option("--policy", sim_policy)->required();
  sim->add_option("--steps", sopts.steps)->required();
  sim->add_option("--seed", sopts.seed);
  sim->add_flag("--log-hidden", sopts.log_hidden, "Record hidden states");
  sim->add_flag("--stationary-start", stationary_start, "Start from the stationary distribution");
  sim->add_option("--out", sim_out, "Output JSONL (default stdout)");

  // estimate
  auto* est = app.add_subcommand("estimate", "Estimate model parameters");
  EstimatorFlags eflags;
  eflags.attach(est);
  std::string est_model, est_policy, est_traj, est_out;
  int est_rewards = 0;
  bool exact_mode = false;
  est->add_option("--model", est_model, "Model file (reward alphabet; required with --exact-mode)");
  est->add_option("--policy", est_policy)->required();
  est->add_option("--trajectory", est_traj);
  est->add_option("--rewards", est_rewards, "Reward cardinality R when no model is given");
  est->add_flag("--exact-mode", exact_mode, "Use exact moments of --model instead of a trajectory");
  est->add_option("--out", est_out, "Report JSON (default stdout)");

  // evaluate
  auto* ev = app.add_subcommand("evaluate", "Compare an estimate report with the true model");
  std::string ev_report, ev_model, ev_csv, ev_out;
  ev->add_option("--estimate", ev_report)->required();
  ev->add_option("--model", ev_model)->required();
  ev->add_option("--csv", ev_csv, "Error CSV (default stdout)");
  ev->add_option("--out", ev_out, "Error summary JSON");

  // sweep
  auto* sw = app.add_subcommand("sweep", "Convergence sweep over N and seeds");
  EstimatorFlags sflags;
  sflags.attach(sw);
  std::string sw_model, sw_policy, sw_out, sw_summary;
  std::vector<std::string> sw_lengths;
  std::vector<std::uint64_t> sw_seeds;
  int sw_workers = 0;
  bool sw_stationary = false;
  sw->add_option("--model", sw_model)->required();
  sw->add_option("--policy", sw_policy)->required();
  sw->add_option("--N", sw_lengths, "Trajectory lengths, e.g. 2^12 2^13")->required();
  sw->add_option("--seeds", sw_seeds, "Seeds")->required();
  sw->add_option("--workers", sw_workers, "Concurrent cells (0 = OpenMP default)");
  sw->add_flag("--stationary-start", sw_stationary);
  sw->add_option("--out", sw_out, "CSV (default stdout)");
  sw->add_option("--summary", sw_summary, "Summary JSON (default stderr)");

  // oracle
  auto* orc = app.add_subcommand("oracle", "Exact quantities of a known model");
  std::string orc_model, orc_policy, orc_out;
  orc->add_option("--model", orc_model)->required();
  orc->add_option("--policy", orc_policy)->required();
  orc->add_option("--out", orc_out, "Bundle JSON (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (*gen) {
      if (fixture) {
        const GeneratorSpec base = standard_fixture_spec();
        gspec = base;
        policy_kind = "random";
      }
      gspec.policy.kind = policy_kind == "random" ? PolicySpec::Kind::random : PolicySpec::Kind::uniform;
      Instance inst;
      try {
        inst = generate_instance(gspec, gen_seed);
      } catch (const RankDeficiencyError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kUsage;
      }
      io::write_json_file(gen_model_out, io::model_to_json(inst.model));
      io::write_json_file(gen_policy_out, io::policy_to_json(inst.policy));
      std::cout << std::setprecision(17) << "attempts " << inst.attempts << "\n";
      std::cout << "sigma_min(O) " << inst.sigma_min_O << "\n";
      if (inst.d_O) std::cout << "d_O " << *inst.d_O << "\n";
      try {
        const SpectralGaps g = compute_gaps(inst.model, inst.policy);
        for (const ActionGaps& a : g.actions)
          std::cout << "action " << a.action << " sigma13 " << a.sigma13 << " omega_min " << a.omega_min
                    << " min sigma(V) " << std::sqrt(a.min_view_sigma_sq()) << " lambda "
                    << compute_lambda(g, a.action) << "\n";
      } catch (const DegenerateError& e) {
        std::cout << "gaps unavailable: " << e.what() << "\n";
      }
      return kOk;
    }

    if (*sim) {
      const PomdpModel model = io::load_model(sim_model);
      const MemorylessPolicy policy = io::load_policy(sim_policy);
      check_compatible(model, policy);
      if (stationary_start) sopts.initial = stationary_distribution(induced_chain(model, policy));
      const Trajectory traj = simulate(model, policy, sopts);
      std::ostringstream out;
      io::write_trajectory(out, traj);
      emit(sim_out, out.str());
      return kOk;
    }

    if (*est) {
      const MemorylessPolicy policy = io::load_policy(est_policy);
      EstimatorOptions options = eflags.options();
      EstimationResult result;
      if (exact_mode) {
        if (est_model.empty()) throw ValidationError("--exact-mode requires --model");
        const PomdpModel model = io::load_model(est_model);
        if (options.states == 0) options.states = model.X;
        result = estimate_exact(model, policy, options);
      } else {
        if (est_traj.empty()) throw ValidationError("--trajectory is required without --exact-mode");
        if (options.states < 1) throw ValidationError("--states is required");
        const Trajectory traj = io::load_trajectory(est_traj);
        int R = est_rewards;
        Vector values;
        if (!est_model.empty()) {
          const PomdpModel model = io::load_model(est_model);
          R = model.R;
          values = model.reward_values;
        }
        if (R == 0) {
          for (const Step& s : traj.steps) R = std::max(R, s.r + 1);
        }
        result = estimate_from_trajectory(policy, traj, R, options, values);
      }
      emit(est_out, io::result_to_json(result).dump(2) + "\n");
      for (const std::string& w : result.warnings) std::cerr << "warning: " << w << "\n";
      for (const ActionReport& a : result.actions)
        if (a.status != ActionStatus::ok)
          std::cerr << "action " << a.action << " " << to_string(a.status) << ": " << a.failure << "\n";
      return result.ok() ? kOk : kEstimation;
    }

    if (*ev) {
      const EstimationResult result = io::result_from_json(io::read_json_file(ev_report));
      const PomdpModel truth = io::load_model(ev_model);
      const ErrorReport report = evaluate_errors(result.estimate, truth);
      std::ostringstream csv;
      io::write_error_csv(csv, report);
      emit(ev_csv, csv.str());
      const std::string summary = io::errors_to_json(report).dump(2) + "\n";
      if (!ev_out.empty())
        io::write_text_file(ev_out, summary);
      else
        std::cerr << summary;
      return kOk;
    }

    if (*sw) {
      SweepConfig config;
      config.model = io::load_model(sw_model);
      config.policy = io::load_policy(sw_policy);
      config.lengths = parse_lengths(sw_lengths);
      config.seeds = sw_seeds;
      config.options = sflags.options();
      if (config.options.states == 0) config.options.states = config.model.X;
      config.stationary_start = sw_stationary;
      config.workers = sw_workers;
      const SweepResult result = run_sweep(config);
      std::ostringstream csv;
      write_sweep_csv(csv, result);
      emit(sw_out, csv.str());
      const std::string summary = summary_json(result.summary, config.lengths).dump(2) + "\n";
      if (!sw_summary.empty())
        io::write_text_file(sw_summary, summary);
      else
        std::cerr << summary;
      return result.summary.failed_cells == 0 ? kOk : kEstimation;
    }

    if (*orc) {
      const PomdpModel model = io::load_model(orc_model);
      const MemorylessPolicy policy = io::load_policy(orc_policy);
      emit(orc_out, io::oracle_bundle(model, policy).dump(2) + "\n");
      return kOk;
    }
  } catch (const IoError& e) {
    std::cerr << "I/O error: " << e.what() << "\n";
    return kIo;
  } catch (const ValidationError& e) {
    std::cerr << "invalid input: " << e.what() << "\n";
    return kUsage;
  } catch (const DimensionError& e) {
    std::cerr << "invalid input: " << e.what() << "\n";
    return kUsage;
  } catch (const NotErgodicError& e) {
    std::cerr << "invalid input: " << e.what() << "\n";
    return kUsage;
  } catch (const Error& e) {
    std::cerr << "estimation failed: " << e.what() << "\n";
    return kEstimation;
  }
  return kUsage;
}
