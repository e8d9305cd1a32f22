#include "spomdp/pipeline.hpp"

#include "spomdp/linalg.hpp"
#include "spomdp/moments.hpp"
#include "spomdp/views.hpp"

#include <cmath>
#include <functional>

namespace spomdp {

const char* to_string(ActionStatus s) {
  switch (s) {
    case ActionStatus::ok: return "ok";
    case ActionStatus::failed: return "failed";
    case ActionStatus::insufficient: return "insufficient";
  }
  return "failed";
}

ActionStatus action_status_from_string(const std::string& s) {
  if (s == "ok") return ActionStatus::ok;
  if (s == "insufficient") return ActionStatus::insufficient;
  if (s == "failed") return ActionStatus::failed;
  throw ValidationError("unknown action status '" + s + "'");
}

bool EstimationResult::ok() const {
  for (const ActionReport& a : actions)
    if (a.status != ActionStatus::ok) return false;
  return estimate.complete();
}

namespace {

std::uint64_t action_seed(std::uint64_t seed, int l) {
  return seed + 0x9E3779B97F4A7C15ULL * static_cast<std::uint64_t>(l + 1);
}

struct ActionInputs {
  CovarianceSet cov;
  MomentPair moments;
};

struct ActionOutcome {
  std::optional<ActionEstimate> estimate;
  /// Plug-in V1 for the gap computation (trajectory mode only).
  Matrix V1;
};

ActionOutcome run_action(int l, const std::function<ActionInputs()>& inputs,
                         const MemorylessPolicy& policy, const ViewEncoding& enc,
                         const EstimatorOptions& options, ActionReport& report) {
  ActionOutcome out;
  const int X = options.states;
  try {
    const ActionInputs in = inputs();
    PowerIterationOptions power = options.power;
    power.seed = action_seed(options.power.seed, l);
    const Decomposition dec = decompose(in.moments.M2, in.moments.M3, X, power);
    report.whitening_eigenvalues = dec.transform.eigenvalues;
    report.components = dec.components.diagnostics;
    report.deflation_residual = dec.components.deflation_residual;
    report.weights = dec.recovered.weights;
    for (int i = 0; i < X; ++i)
      if (dec.recovered.degenerate[i])
        report.flags.push_back("third-view column " + std::to_string(i) +
                               " had no positive mass; replaced by uniform");
    ActionEstimate est = recover_action(l, dec.recovered.columns, dec.recovered.columns_raw,
                                        dec.recovered.weights, in.cov, policy, enc, X);
    est.samples = report.samples;
    report.flags.insert(report.flags.end(), est.flags.begin(), est.flags.end());
    out.V1 = recover_first_view(est.V3, in.cov, X);
    out.estimate = std::move(est);
  } catch (const Error& e) {
    report.status = ActionStatus::failed;
    report.failure = e.what();
  }
  return out;
}

void check_options(const EstimatorOptions& options, int Y) {
  if (options.states < 1) throw ValidationError("number of states X must be positive");
  if (options.states > Y) throw ValidationError("X must not exceed Y");
  if (!(options.delta > 0.0 && options.delta < 1.0)) throw ValidationError("delta must lie in (0,1)");
}

// Selection, alignment, transitions, contraction, sample-size thresholds.
void finish(EstimationResult& result, std::vector<std::optional<ActionEstimate>>& estimates,
            const std::vector<std::optional<double>>& selection_scores,
            const MemorylessPolicy& policy, int Y, int R, const Vector& reward_values,
            const std::optional<MarkovChain>& true_chain) {
  const EstimatorOptions& options = result.options;
  const int A = static_cast<int>(estimates.size());
  const int X = options.states;

  bool any = false;
  for (const auto& e : estimates) any = any || e.has_value();
  if (!any) {
    result.estimate.X = X;
    result.estimate.Y = Y;
    result.estimate.A = A;
    result.estimate.R = R;
    result.estimate.reward_values = reward_values;
    result.estimate.O = Matrix::Constant(Y, X, 1.0 / Y);
    result.estimate.Gamma = Tensor3(X, A, R, 1.0 / R);
    result.estimate.T = Tensor3(X, X, A, 1.0 / X);
    result.estimate.T_raw = result.estimate.T;
    result.estimate.permutations.assign(A, {});
    result.estimate.action_observations.assign(A, std::nullopt);
    for (int l = 0; l < A; ++l) result.estimate.failed_actions.push_back(l);
    result.warnings.push_back("every action failed; no estimate produced");
    return;
  }

  int reference = -1;
  std::vector<std::optional<double>> scores = selection_scores;
  for (int l = 0; l < A; ++l)
    if (!estimates[l]) scores[l].reset();
  try {
    reference = select_reference_action(scores, &result.warnings);
  } catch (const InsufficientSamplesError&) {
    std::size_t best = 0;
    for (int l = 0; l < A; ++l)
      if (estimates[l] && (reference < 0 || estimates[l]->samples > best)) {
        reference = l;
        best = estimates[l]->samples;
      }
    result.warnings.push_back("no observation bound available; reference action chosen by sample count");
  }

  std::vector<std::optional<Matrix>> observations(A);
  for (int l = 0; l < A; ++l)
    if (estimates[l]) observations[l] = estimates[l]->observation;
  const std::vector<Alignment> alignments = align_permutations(observations, reference);
  for (int l = 0; l < A; ++l)
    if (estimates[l] && alignments[l].warning)
      result.warnings.push_back("alignment of action " + std::to_string(l) +
                                " is unreliable: matched column distance " +
                                std::to_string(alignments[l].max_column_cost) +
                                " exceeds d_O/4");

  try {
    result.estimate = assemble_estimate(estimates, reference, alignments, Y, R, reward_values);
  } catch (const RankDeficiencyError& e) {
    // Selected O cannot be pseudo-inverted: every transition row is unusable.
    for (auto& e2 : estimates) e2.reset();
    for (ActionReport& a : result.actions) {
      a.status = ActionStatus::failed;
      a.failure = e.what();
    }
    std::vector<std::optional<ActionEstimate>> none(A);
    finish(result, none, selection_scores, policy, Y, R, reward_values, true_chain);
    return;
  }

  // Global gap quantities from the selected observation estimate.
  result.gaps.sigma_min_O = kth_singular_value(result.estimate.O, X);
  if (X >= 2) result.gaps.d_O = separability(result.estimate.O);

  MarkovChain chain;
  if (true_chain) {
    chain = *true_chain;
  } else {
    chain = induced_chain(result.estimate.as_model(), policy);
  }
  result.contraction = contraction_coefficients(chain, options.G_override, options.theta_override);
  if (!result.contraction.warning.empty()) result.warnings.push_back(result.contraction.warning);

  for (ActionReport& a : result.actions) {
    if (!a.gaps || !result.contraction.contracts) continue;
    try {
      SpectralGaps single = result.gaps;
      single.actions = {*a.gaps};
      single.actions[0].action = 0;
      a.threshold = sample_size_threshold(single, 0, result.contraction.G, result.contraction.theta,
                                          options.Theta, Y, A, R, options.delta, options.constants);
      if (result.mode == "trajectory" && static_cast<double>(a.samples) < a.threshold->value) {
        if (options.enforce_sample_condition) {
          a.status = ActionStatus::insufficient;
          a.failure = "N(l) = " + std::to_string(a.samples) + " below sample-size threshold " +
                      std::to_string(a.threshold->value);
        } else {
          a.flags.push_back("N(l) below the sample-size threshold (Theta = " +
                            std::to_string(options.Theta) + ")");
        }
      }
    } catch (const Error& e) {
      a.flags.push_back(std::string("sample-size threshold unavailable: ") + e.what());
    }
  }
}

}  // namespace

EstimationResult estimate_from_trajectory(const MemorylessPolicy& policy, const Trajectory& traj,
                                          int R, const EstimatorOptions& options,
                                          const Vector& reward_values) {
  const int Y = policy.Y();
  const int A = policy.A();
  check_options(options, Y);
  if (R < 1) throw ValidationError("reward cardinality must be positive");
  {
    const std::vector<std::string> issues = validate_policy(policy);
    if (!issues.empty()) throw ValidationError("invalid policy: " + issues.front());
  }
  for (const Step& s : traj.steps)
    if (s.y < 0 || s.y >= Y || s.a < 0 || s.a >= A || s.r < 0 || s.r >= R)
      throw ValidationError("trajectory index out of range for Y, A, R");

  Vector values = reward_values;
  if (values.size() == 0) values = Vector::LinSpaced(R, 0.0, R - 1.0);
  if (values.size() != R) throw ValidationError("reward_values has wrong length");

  const int X = options.states;
  const ViewEncoding enc{Y, A, R};
  EstimationResult result;
  result.mode = "trajectory";
  result.options = options;
  result.gaps.mode = "plug-in";
  result.actions.resize(A);

  std::vector<std::optional<ActionEstimate>> estimates(A);
  std::vector<std::optional<double>> b_o(A);
  std::vector<ActionGaps> plugin_gaps;

  // Actions are independent until alignment.
#pragma omp parallel for schedule(dynamic)
  for (int l = 0; l < A; ++l) {
    ActionReport& report = result.actions[l];
    report.action = l;
    const ActionViewSamples samples = collect_views(traj, l, enc);
    report.samples = samples.count();
    if (samples.count() == 0) {
      report.status = ActionStatus::failed;
      report.failure = "action never played in the interior of the trajectory (N(l) = 0)";
      continue;
    }
    ActionOutcome out = run_action(
        l,
        [&] {
          ActionInputs in;
          in.cov = empirical_covariances(samples, enc);
          const SymmetrizationOperators ops = symmetrization_operators(in.cov, X);
          in.moments = empirical_moments(ops, samples, Y);
          return in;
        },
        policy, enc, options, report);
    if (!out.estimate) continue;
    const ActionEstimate& est = *out.estimate;
    try {
      const CovarianceSet cov = empirical_covariances(samples, enc);
      ActionGaps g = action_gaps(l, cov, out.V1, est.V2, est.V3, est.weights, policy, X);
      check_gaps(g);
      const double sigma_o = kth_singular_value(est.observation, X);
      report.gaps = g;
      report.lambda = compute_lambda(
          LambdaInputs{sigma_o, g.pi_min, g.sigma13, g.omega_min, g.min_view_sigma_sq()});
      report.bounds = confidence_bounds(*report.lambda, static_cast<double>(report.samples),
                                        options.delta, Y, R, X, options.constants);
      b_o[l] = report.bounds->B_O;
    } catch (const Error& e) {
      report.flags.push_back(std::string("bounds unavailable: ") + e.what());
    }
    estimates[l] = std::move(out.estimate);
  }

  for (const ActionReport& a : result.actions)
    if (a.gaps) result.gaps.actions.push_back(*a.gaps);

  finish(result, estimates, b_o, policy, Y, R, values, std::nullopt);
  return result;
}

EstimationResult estimate_exact(const PomdpModel& model, const MemorylessPolicy& policy,
                                const EstimatorOptions& options) {
  {
    const std::vector<std::string> issues = validate_model(model);
    if (!issues.empty()) throw ValidationError("invalid model: " + issues.front());
    const std::vector<std::string> pissues = validate_policy(policy);
    if (!pissues.empty()) throw ValidationError("invalid policy: " + pissues.front());
  }
  check_compatible(model, policy);
  check_options(options, model.Y);
  const int X = options.states;
  if (X != model.X) throw ValidationError("exact mode requires X to equal the model's state count");
  const int A = model.A;
  const ViewEncoding enc = encoding_for(model);
  const MarkovChain chain = induced_chain(model, policy);

  EstimationResult result;
  result.mode = "exact";
  result.options = options;
  result.actions.resize(A);

  SpectralGaps oracle;
  try {
    oracle = compute_gaps(model, policy);
  } catch (const DegenerateError& e) {
    result.warnings.push_back(std::string("oracle gaps unavailable: ") + e.what());
  }

  std::vector<std::optional<ActionEstimate>> estimates(A);
  std::vector<std::optional<double>> inverse_lambda(A);
  for (int l = 0; l < A; ++l) {
    ActionReport& report = result.actions[l];
    report.action = l;
    ActionOutcome out = run_action(
        l,
        [&] {
          const ViewMatrices views = view_matrices_unchecked(model, policy, l);
          const Vector w = action_conditional_distribution(model, policy, l);
          ActionInputs in;
          in.cov = covariances_from_views(views, w);
          const SymmetrizationOperators ops = symmetrization_operators(in.cov, X);
          in.moments = population_moments(ops, views, w);
          return in;
        },
        policy, enc, options, report);
    if (!oracle.actions.empty()) {
      report.gaps = oracle.actions[l];
      report.lambda = compute_lambda(oracle, l);
      inverse_lambda[l] = 1.0 / *report.lambda;
    }
    estimates[l] = std::move(out.estimate);
  }

  finish(result, estimates, inverse_lambda, policy, model.Y, model.R, model.reward_values, chain);
  result.gaps = oracle;
  result.gaps.mode = "oracle";
  return result;
}

}  // namespace spomdp
