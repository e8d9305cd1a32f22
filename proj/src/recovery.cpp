#include "spomdp/recovery.hpp"

#include "spomdp/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace spomdp {

bool DensityFlags::any() const {
  return std::any_of(degenerate.begin(), degenerate.end(), [](bool b) { return b; });
}

Matrix recover_second_view(const Matrix& V3, const CovarianceSet& cov, int X) {
  return cov.K21 * (truncated_pinv(cov.K31, X, "K31").pinv * V3);
}

Matrix recover_first_view(const Matrix& V3, const CovarianceSet& cov, int X) {
  return cov.K12 * (truncated_pinv(cov.K32, X, "K32").pinv * V3);
}

Matrix recover_reward_raw(const Matrix& V2, const ViewEncoding& enc) {
  if (V2.rows() != enc.d2()) throw DimensionError("recover_reward: V2 has wrong row count");
  const int X = static_cast<int>(V2.cols());
  Matrix raw = Matrix::Zero(X, enc.R);
  for (int i = 0; i < X; ++i)
    for (int n = 0; n < enc.Y; ++n)
      for (int m = 0; m < enc.R; ++m) raw(i, m) += V2(enc.second_index(n, m), i);
  return raw;
}

Matrix recover_reward(const Matrix& V2, const ViewEncoding& enc, DensityFlags* flags) {
  const Matrix raw = recover_reward_raw(V2, enc);
  Matrix out(raw.rows(), raw.cols());
  if (flags) flags->degenerate.assign(raw.rows(), false);
  for (int i = 0; i < raw.rows(); ++i) {
    bool degenerate = false;
    out.row(i) = clip_and_normalize(raw.row(i).transpose(), &degenerate).transpose();
    if (flags) flags->degenerate[i] = degenerate;
  }
  return out;
}

double recover_rho(const Matrix& V2, const MemorylessPolicy& policy, const ViewEncoding& enc, int i,
                   int l) {
  if (V2.rows() != enc.d2()) throw DimensionError("recover_rho: V2 has wrong row count");
  if (policy.Y() != enc.Y || l < 0 || l >= policy.A())
    throw DimensionError("recover_rho: policy does not match the encoding");
  double rho = 0.0;
  for (int n = 0; n < enc.Y; ++n) {
    const double p = policy.Pi(n, l);
    if (!(p > 0.0))
      throw DegenerateError("f_pi(" + std::to_string(l) + " | e_" + std::to_string(n) +
                            ") is zero; rho is undefined");
    for (int m = 0; m < enc.R; ++m) rho += V2(enc.second_index(n, m), i) / p;
  }
  return rho;
}

Matrix recover_observation(const Matrix& V2, const MemorylessPolicy& policy, const ViewEncoding& enc,
                           int l, DensityFlags* flags) {
  const int X = static_cast<int>(V2.cols());
  Matrix out(enc.Y, X);
  if (flags) flags->degenerate.assign(X, false);
  for (int i = 0; i < X; ++i) {
    const double rho = recover_rho(V2, policy, enc, i, l);
    Vector raw(enc.Y);
    for (int n = 0; n < enc.Y; ++n) {
      double s = 0.0;
      for (int m = 0; m < enc.R; ++m) s += V2(enc.second_index(n, m), i);
      raw(n) = s / policy.Pi(n, l);
    }
    bool degenerate = !(rho > 0.0) || !std::isfinite(rho);
    if (!degenerate) raw /= rho;
    bool clipped_out = false;
    out.col(i) = clip_and_normalize(raw, &clipped_out);
    if (flags) flags->degenerate[i] = degenerate || clipped_out;
  }
  return out;
}

double separability(const Matrix& O) {
  const int X = static_cast<int>(O.cols());
  if (X < 2) throw DimensionError("separability is undefined for fewer than two states");
  double best = std::numeric_limits<double>::infinity();
  for (int a = 0; a < X; ++a)
    for (int b = a + 1; b < X; ++b) best = std::min(best, l1_distance(O.col(a), O.col(b)));
  return best;
}

int select_reference_action(const std::vector<std::optional<double>>& bounds,
                            std::vector<std::string>* warnings) {
  int best = -1;
  for (int l = 0; l < static_cast<int>(bounds.size()); ++l) {
    if (!bounds[l]) {
      if (warnings)
        warnings->push_back("action " + std::to_string(l) +
                            " excluded from reference selection: bound undefined");
      continue;
    }
    if (best < 0 || *bounds[l] < *bounds[best]) best = l;
  }
  if (best < 0) throw InsufficientSamplesError("no action has a defined observation bound");
  return best;
}

Alignment align_columns(const Matrix& estimate, const Matrix& reference, double warn_threshold) {
  if (estimate.rows() != reference.rows() || estimate.cols() != reference.cols())
    throw DimensionError("align_columns: shape mismatch");
  const int X = static_cast<int>(estimate.cols());
  Matrix cost(X, X);
  for (int i = 0; i < X; ++i)
    for (int j = 0; j < X; ++j) cost(i, j) = l1_distance(estimate.col(i), reference.col(j));
  Alignment a;
  a.permutation = solve_assignment(cost);
  for (int i = 0; i < X; ++i) {
    const double c = cost(i, a.permutation[i]);
    a.total_cost += c;
    a.max_column_cost = std::max(a.max_column_cost, c);
  }
  a.warning = a.max_column_cost > warn_threshold;
  return a;
}

std::vector<Alignment> align_permutations(const std::vector<std::optional<Matrix>>& observations,
                                          int reference) {
  if (reference < 0 || reference >= static_cast<int>(observations.size()) ||
      !observations[reference])
    throw DimensionError("align_permutations: reference action has no estimate");
  const Matrix& ref = *observations[reference];
  const int X = static_cast<int>(ref.cols());
  const double threshold =
      X >= 2 ? separability(ref) / 4.0 : std::numeric_limits<double>::infinity();
  std::vector<Alignment> out(observations.size());
  for (std::size_t l = 0; l < observations.size(); ++l) {
    if (!observations[l]) continue;
    if (static_cast<int>(l) == reference) {
      out[l].permutation.resize(X);
      for (int i = 0; i < X; ++i) out[l].permutation[i] = i;
      continue;
    }
    out[l] = align_columns(*observations[l], ref, threshold);
  }
  return out;
}

TransitionEstimate recover_transition(const Matrix& V3, const Matrix& O) {
  const int X = static_cast<int>(O.cols());
  if (V3.rows() != O.rows() || V3.cols() != X)
    throw DimensionError("recover_transition: V3 and O disagree in shape");
  const Matrix pinv = truncated_pinv(O, X, "O").pinv;  // X x Y
  if (numerical_rank(O, kRankTol) < X)
    throw RankDeficiencyError("O", numerical_rank(O, kRankTol), X);
  TransitionEstimate t;
  t.raw = (pinv * V3).transpose();
  t.projected.resize(X, X);
  for (int i = 0; i < X; ++i) t.projected.row(i) = project_to_simplex(t.raw.row(i).transpose()).transpose();
  return t;
}

Matrix permute_columns(const Matrix& in, const std::vector<int>& sigma) {
  Matrix out(in.rows(), in.cols());
  for (int i = 0; i < in.cols(); ++i) out.col(sigma[i]) = in.col(i);
  return out;
}

Matrix permute_rows(const Matrix& in, const std::vector<int>& sigma) {
  Matrix out(in.rows(), in.cols());
  for (int i = 0; i < in.rows(); ++i) out.row(sigma[i]) = in.row(i);
  return out;
}

Vector permute_entries(const Vector& in, const std::vector<int>& sigma) {
  Vector out(in.size());
  for (int i = 0; i < in.size(); ++i) out(sigma[i]) = in(i);
  return out;
}

ActionEstimate recover_action(int action, const Matrix& V3, const Matrix& V3_raw,
                              const Vector& weights, const CovarianceSet& cov,
                              const MemorylessPolicy& policy, const ViewEncoding& enc, int X) {
  ActionEstimate est;
  est.action = action;
  est.samples = cov.samples;
  est.V3 = V3;
  est.V3_raw = V3_raw;
  est.weights = weights;
  est.V2 = recover_second_view(V3, cov, X);
  DensityFlags reward_flags;
  DensityFlags obs_flags;
  est.reward = recover_reward(est.V2, enc, &reward_flags);
  est.observation = recover_observation(est.V2, policy, enc, action, &obs_flags);
  est.rho.resize(X);
  for (int i = 0; i < X; ++i) est.rho(i) = recover_rho(est.V2, policy, enc, i, action);
  for (int i = 0; i < X; ++i) {
    if (reward_flags.degenerate[i])
      est.flags.push_back("reward density for state " + std::to_string(i) +
                          " was degenerate; replaced by uniform");
    if (obs_flags.degenerate[i])
      est.flags.push_back("observation density for state " + std::to_string(i) +
                          " was degenerate; replaced by uniform");
  }
  return est;
}

ActionEstimate apply_permutation(const ActionEstimate& est, const std::vector<int>& sigma) {
  ActionEstimate out = est;
  out.V2 = permute_columns(est.V2, sigma);
  out.V3 = permute_columns(est.V3, sigma);
  out.V3_raw = permute_columns(est.V3_raw, sigma);
  out.weights = permute_entries(est.weights, sigma);
  out.observation = permute_columns(est.observation, sigma);
  out.reward = permute_rows(est.reward, sigma);
  out.rho = permute_entries(est.rho, sigma);
  return out;
}

PomdpModel PomdpEstimate::as_model() const {
  return PomdpModel{X, Y, A, R, T, O, Gamma, reward_values};
}

PomdpEstimate assemble_estimate(const std::vector<std::optional<ActionEstimate>>& estimates,
                                int reference, const std::vector<Alignment>& alignments, int Y,
                                int R, const Vector& reward_values) {
  const int A = static_cast<int>(estimates.size());
  if (reference < 0 || reference >= A || !estimates[reference])
    throw DimensionError("assemble_estimate: reference action has no estimate");
  if (static_cast<int>(alignments.size()) != A)
    throw DimensionError("assemble_estimate: one alignment per action required");
  const int X = static_cast<int>(estimates[reference]->observation.cols());

  PomdpEstimate out;
  out.X = X;
  out.Y = Y;
  out.A = A;
  out.R = R;
  out.reward_values = reward_values;
  out.reference_action = reference;
  out.O = estimates[reference]->observation;
  out.Gamma = Tensor3(X, A, R, 1.0 / R);
  out.T = Tensor3(X, X, A, 1.0 / X);
  out.T_raw = Tensor3(X, X, A, 1.0 / X);
  out.permutations.resize(A);
  out.action_observations.resize(A);

  for (int l = 0; l < A; ++l) {
    if (!estimates[l]) {
      out.failed_actions.push_back(l);
      continue;
    }
    const std::vector<int>& sigma = alignments[l].permutation;
    if (static_cast<int>(sigma.size()) != X)
      throw DimensionError("assemble_estimate: missing permutation for action " + std::to_string(l));
    out.permutations[l] = sigma;
    const ActionEstimate aligned = apply_permutation(*estimates[l], sigma);
    out.action_observations[l] = aligned.observation;
    for (int i = 0; i < X; ++i)
      for (int m = 0; m < R; ++m) out.Gamma(i, l, m) = aligned.reward(i, m);
    const TransitionEstimate t = recover_transition(aligned.V3, out.O);
    for (int i = 0; i < X; ++i)
      for (int j = 0; j < X; ++j) {
        out.T(i, j, l) = t.projected(i, j);
        out.T_raw(i, j, l) = t.raw(i, j);
      }
  }
  return out;
}

ErrorReport evaluate_errors(const PomdpEstimate& est, const PomdpModel& truth) {
  if (est.X != truth.X || est.Y != truth.Y || est.A != truth.A || est.R != truth.R)
    throw DimensionError("evaluate_errors: cardinality mismatch");
  const int X = truth.X;
  const double nan = std::numeric_limits<double>::quiet_NaN();
  Matrix cost(X, X);
  for (int e = 0; e < X; ++e)
    for (int t = 0; t < X; ++t) cost(e, t) = l1_distance(est.O.col(e), truth.O.col(t));
  ErrorReport rep;
  rep.permutation = solve_assignment(cost);
  std::vector<int> inverse(X);
  for (int e = 0; e < X; ++e) inverse[rep.permutation[e]] = e;

  std::vector<bool> failed(truth.A, false);
  for (int l : est.failed_actions) failed[l] = true;
  rep.action_max_err_O.assign(truth.A, nan);
  rep.action_max_err_R.assign(truth.A, nan);
  rep.action_max_err_T.assign(truth.A, nan);

  for (int l = 0; l < truth.A; ++l) {
    if (!failed[l]) {
      rep.action_max_err_R[l] = 0.0;
      rep.action_max_err_T[l] = 0.0;
      if (est.action_observations.size() == static_cast<std::size_t>(truth.A) &&
          est.action_observations[l]) {
        double worst = 0.0;
        for (int e = 0; e < X; ++e)
          worst = std::max(worst, l1_distance(est.action_observations[l]->col(e),
                                              truth.O.col(rep.permutation[e])));
        rep.action_max_err_O[l] = worst;
      }
    }
    for (int t = 0; t < X; ++t) {
      const int e = inverse[t];
      ErrorRow row;
      row.state = t;
      row.action = l;
      row.err_O = l1_distance(est.O.col(e), truth.O.col(t));
      if (failed[l]) {
        row.err_R = nan;
        row.err_T = nan;
      } else {
        double r = 0.0;
        for (int m = 0; m < truth.R; ++m) r += std::abs(est.Gamma(e, l, m) - truth.Gamma(t, l, m));
        double s = 0.0;
        for (int j = 0; j < X; ++j) {
          const double d = est.T(e, j, l) - truth.T(t, rep.permutation[j], l);
          s += d * d;
        }
        row.err_R = r;
        row.err_T = std::sqrt(s);
        rep.max_err_R = std::max(rep.max_err_R, row.err_R);
        rep.max_err_T = std::max(rep.max_err_T, row.err_T);
        rep.action_max_err_R[l] = std::max(rep.action_max_err_R[l], row.err_R);
        rep.action_max_err_T[l] = std::max(rep.action_max_err_T[l], row.err_T);
      }
      rep.max_err_O = std::max(rep.max_err_O, row.err_O);
      rep.rows.push_back(row);
    }
  }
  return rep;
}

}  // namespace spomdp
