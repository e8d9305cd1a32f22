#pragma once

#include "spomdp/model.hpp"
#include "spomdp/moments.hpp"
#include "spomdp/views.hpp"

#include <optional>
#include <string>
#include <vector>

namespace spomdp {

/// V2 from V3 by inverting the second-view symmetrization:
/// mu2_i = K21 pinv(K31) mu3_i (pinv truncated to rank X).
Matrix recover_second_view(const Matrix& V3, const CovarianceSet& cov, int X);

/// The literal variant K12 pinv(K32) mu3_i. It reconstructs the FIRST view
/// (d1 rows), so it cannot feed the V2-based recovery; it is kept for
/// comparison and for plug-in estimates of sigma_min(V1).
Matrix recover_first_view(const Matrix& V3, const CovarianceSet& cov, int X);

struct DensityFlags {
  std::vector<bool> degenerate;
  bool any() const;
};

/// f_R(e_m | i, l) = sum_n V2[(n,m), i]; rows clipped and renormalized.
/// Returns X x R.
Matrix recover_reward(const Matrix& V2, const ViewEncoding& enc, DensityFlags* flags = nullptr);
/// Unclipped marginals.
Matrix recover_reward_raw(const Matrix& V2, const ViewEncoding& enc);

/// rho(i, l) = sum_{n,m} V2[(n,m), i] / f_pi(l | e_n) = 1 / P(a = l | x = i).
double recover_rho(const Matrix& V2, const MemorylessPolicy& policy, const ViewEncoding& enc, int i,
                   int l);

/// f_O^(l)(e_n | i) = sum_m V2[(n,m), i] / (f_pi(l | e_n) rho(i, l)); columns
/// clipped and renormalized. Returns Y x X.
Matrix recover_observation(const Matrix& V2, const MemorylessPolicy& policy, const ViewEncoding& enc,
                           int l, DensityFlags* flags = nullptr);

/// min over column pairs of the l1 distance. Requires X >= 2.
double separability(const Matrix& O);

/// argmin over defined bounds, ties to the smallest action. Undefined
/// entries (actions without samples) are skipped. Throws when all are undefined.
int select_reference_action(const std::vector<std::optional<double>>& bounds,
                            std::vector<std::string>* warnings = nullptr);

struct Alignment {
  /// sigma[i] = reference column matched to column i.
  std::vector<int> permutation;
  double total_cost = 0.0;
  double max_column_cost = 0.0;
  bool warning = false;
};

/// Optimal l1 assignment of the columns of `estimate` to those of `reference`.
/// `warn_threshold` is compared against the largest matched column cost.
Alignment align_columns(const Matrix& estimate, const Matrix& reference, double warn_threshold);

/// Per-action alignment to the reference action's observation estimate.
/// The warning fires when some matched column is farther than d_O / 4 from
/// its reference column, with d_O the separability of the reference.
std::vector<Alignment> align_permutations(const std::vector<std::optional<Matrix>>& observations,
                                          int reference);

struct TransitionEstimate {
  Matrix raw;        // X x X, row i = pinv(O) V3(:, i)
  Matrix projected;  // rows projected onto the simplex
};

/// Throws RankDeficiencyError when O has numerical rank below X.
TransitionEstimate recover_transition(const Matrix& V3, const Matrix& O);

/// Relabel columns: out(:, sigma[i]) = in(:, i).
Matrix permute_columns(const Matrix& in, const std::vector<int>& sigma);
/// Relabel rows: out(sigma[i], :) = in(i, :).
Matrix permute_rows(const Matrix& in, const std::vector<int>& sigma);
Vector permute_entries(const Vector& in, const std::vector<int>& sigma);

/// Everything recovered from one action's decomposition, in the action's own
/// latent labeling until alignment is applied.
struct ActionEstimate {
  int action = 0;
  std::size_t samples = 0;
  Matrix V2;           // (Y*R) x X
  Matrix V3;           // Y x X, normalized columns
  Matrix V3_raw;       // Y x X
  Vector weights;      // omega^(l)
  Matrix observation;  // Y x X
  Matrix reward;       // X x R
  Vector rho;          // X
  std::vector<std::string> flags;
};

/// Closed-form recovery of O, R and rho from a decomposed third view.
ActionEstimate recover_action(int action, const Matrix& V3, const Matrix& V3_raw,
                              const Vector& weights, const CovarianceSet& cov,
                              const MemorylessPolicy& policy, const ViewEncoding& enc, int X);

/// Relabel one action estimate with the permutation from alignment.
ActionEstimate apply_permutation(const ActionEstimate& est, const std::vector<int>& sigma);

/// Collated model estimate. Failed actions keep uniform placeholder
/// densities and are listed in `failed_actions`.
struct PomdpEstimate {
  int X = 0;
  int Y = 0;
  int A = 0;
  int R = 0;
  Matrix O;                 // selected f_O, Y x X
  Tensor3 Gamma;            // X x A x R
  Tensor3 T;                // projected, X x X x A
  Tensor3 T_raw;            // before projection
  Vector reward_values;
  int reference_action = -1;
  std::vector<std::vector<int>> permutations;
  std::vector<int> failed_actions;
  /// Per-action observation estimates after alignment (empty for failed actions).
  std::vector<std::optional<Matrix>> action_observations;

  bool complete() const { return failed_actions.empty(); }
  PomdpModel as_model() const;
};

/// Aligns, recovers transitions, and collates per-action results.
/// `estimates[l]` empty means action l failed.
PomdpEstimate assemble_estimate(const std::vector<std::optional<ActionEstimate>>& estimates,
                                int reference, const std::vector<Alignment>& alignments, int Y,
                                int R, const Vector& reward_values);

struct ErrorRow {
  int state = 0;
  int action = 0;
  double err_O = 0.0;  // l1
  double err_R = 0.0;  // l1
  double err_T = 0.0;  // l2
};

struct ErrorReport {
  /// Estimate state e corresponds to true state permutation[e].
  std::vector<int> permutation;
  std::vector<ErrorRow> rows;
  double max_err_O = 0.0;
  double max_err_R = 0.0;
  double max_err_T = 0.0;
  /// Per action maxima of the selected-O/R/T errors.
  std::vector<double> action_max_err_R;
  std::vector<double> action_max_err_T;
  /// Per action max l1 error of that action's own observation estimate.
  std::vector<double> action_max_err_O;
};

/// Errors of an estimate against the truth after optimal l1 alignment on O.
ErrorReport evaluate_errors(const PomdpEstimate& estimate, const PomdpModel& truth);

}  // namespace spomdp
