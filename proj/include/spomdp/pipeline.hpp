#pragma once

#include "spomdp/bounds.hpp"
#include "spomdp/model.hpp"
#include "spomdp/recovery.hpp"
#include "spomdp/tensor_decomp.hpp"

#include <optional>
#include <string>
#include <vector>

namespace spomdp {

struct EstimatorOptions {
  /// Number of hidden states; an input of the method, not estimated.
  int states = 0;
  PowerIterationOptions power;
  double delta = 0.05;
  BoundConstants constants;
  std::optional<double> G_override;
  std::optional<double> theta_override;
  /// Caller-supplied constant of the sample-size condition.
  double Theta = 1.0;
  /// Treat N(l) below the sample-size threshold as an estimation failure.
  bool enforce_sample_condition = false;
};

enum class ActionStatus { ok, failed, insufficient };

const char* to_string(ActionStatus s);
ActionStatus action_status_from_string(const std::string& s);

struct ActionReport {
  int action = 0;
  std::size_t samples = 0;
  ActionStatus status = ActionStatus::ok;
  std::string failure;
  std::optional<ActionGaps> gaps;
  std::optional<double> lambda;
  std::optional<ConfidenceBounds> bounds;
  std::optional<SampleSizeThreshold> threshold;
  Vector weights;
  Vector whitening_eigenvalues;
  std::vector<ComponentDiagnostics> components;
  double deflation_residual = 0.0;
  std::vector<std::string> flags;
};

struct EstimationResult {
  /// "trajectory" or "exact"
  std::string mode;
  PomdpEstimate estimate;
  std::vector<ActionReport> actions;
  /// Global gap quantities; mode "plug-in" for trajectories, "oracle" for exact runs.
  SpectralGaps gaps;
  Contraction contraction;
  EstimatorOptions options;
  std::vector<std::string> warnings;

  bool ok() const;
};

/// Full estimator on one trajectory. R is the reward cardinality; reward
/// values default to the indices 0..R-1.
EstimationResult estimate_from_trajectory(const MemorylessPolicy& policy, const Trajectory& traj,
                                          int R, const EstimatorOptions& options,
                                          const Vector& reward_values = Vector());

/// Same pipeline fed with exact covariances and moments of a known model.
EstimationResult estimate_exact(const PomdpModel& model, const MemorylessPolicy& policy,
                                const EstimatorOptions& options);

}  // namespace spomdp
