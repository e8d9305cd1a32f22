#pragma once

#include "spomdp/types.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace spomdp {

/// Ground-truth POMDP densities.
///   T(i, j, l)     = f_T(j | i, l)        X x X x A
///   O(n, i)        = f_O(e_n | i)         Y x X
///   Gamma(i, l, m) = f_R(e_m | i, l)      X x A x R
struct PomdpModel {
  int X = 0;
  int Y = 0;
  int A = 0;
  int R = 0;
  Tensor3 T;
  Matrix O;
  Tensor3 Gamma;
  Vector reward_values;

  /// Transition matrix T(:, :, l).
  Matrix transition_slice(int l) const;
  /// Mean reward rbar(i, l) as an X x A matrix.
  Matrix mean_rewards() const;
};

/// Stochastic memoryless policy; Pi(n, l) = f_pi(l | e_n).
struct MemorylessPolicy {
  Matrix Pi;

  int Y() const { return static_cast<int>(Pi.rows()); }
  int A() const { return static_cast<int>(Pi.cols()); }
  double pi_min() const { return Pi.size() == 0 ? 0.0 : Pi.minCoeff(); }
  /// min_n f_pi(l | e_n)
  double pi_min(int l) const { return Pi.col(l).minCoeff(); }

  static MemorylessPolicy uniform(int Y, int A);
};

struct Step {
  int y = 0;
  int a = 0;
  int r = 0;
  bool operator==(const Step&) const = default;
};

struct Trajectory {
  std::vector<Step> steps;
  std::uint64_t seed = 0;
  std::optional<std::vector<int>> hidden_states;

  std::size_t size() const noexcept { return steps.size(); }
  bool operator==(const Trajectory&) const = default;
};

/// Row-stochastic chain P(x, x') = f_{T,pi}(x' | x).
struct MarkovChain {
  Matrix P;
  int size() const { return static_cast<int>(P.rows()); }
};

inline constexpr double kStochasticTol = 1e-12;
inline constexpr double kRankTol = 1e-10;
inline constexpr double kZeroTol = 1e-12;

/// Every violated invariant, one message each. Empty means valid.
std::vector<std::string> validate_model(const PomdpModel& model);
std::vector<std::string> validate_policy(const MemorylessPolicy& policy);
/// Policy/model cardinality agreement.
void check_compatible(const PomdpModel& model, const MemorylessPolicy& policy);

MarkovChain induced_chain(const PomdpModel& model, const MemorylessPolicy& policy);

struct ErgodicityReport {
  bool irreducible = false;
  int period = 0;
  bool ergodic() const { return irreducible && period == 1; }
};

/// Support-graph analysis: strong connectivity and the gcd of cycle lengths.
/// Entries at or below kZeroTol are treated as absent edges.
ErgodicityReport check_ergodicity(const MarkovChain& chain);

/// Throws NotErgodicError for reducible or periodic chains.
Vector stationary_distribution(const MarkovChain& chain);

/// p(l | i) = sum_n O(n, i) Pi(n, l)
Vector action_given_state(const PomdpModel& model, const MemorylessPolicy& policy, int l);

/// P(x = i | a = l) under the stationary distribution.
Vector action_conditional_distribution(const PomdpModel& model, const MemorylessPolicy& policy,
                                       int l);

/// P(a = l) under the stationary distribution.
double action_probability(const PomdpModel& model, const MemorylessPolicy& policy, int l);

double expected_average_reward(const PomdpModel& model, const MemorylessPolicy& policy);

struct SimulationOptions {
  std::size_t steps = 0;
  std::uint64_t seed = 0;
  /// Initial state distribution; empty means uniform over X.
  Vector initial;
  bool log_hidden = false;
};

/// Trajectory generated by x1 ~ initial, y ~ O, a ~ Pi, r ~ Gamma, x' ~ T.
/// Deterministic in (model, policy, options).
Trajectory simulate(const PomdpModel& model, const MemorylessPolicy& policy,
                    const SimulationOptions& options);

struct Contraction {
  double G = 1.0;
  double theta = 0.0;
  /// False when the Dobrushin coefficient is 1 and no override was given.
  bool contracts = true;
  bool overridden = false;
  std::string warning;
};

/// Dobrushin coefficient theta = max_{x,x'} ||P(x,:) - P(x',:)||_1 / 2 with G = 1.
/// Either value may be overridden by the caller.
Contraction contraction_coefficients(const MarkovChain& chain,
                                     std::optional<double> G_override = std::nullopt,
                                     std::optional<double> theta_override = std::nullopt);

}  // namespace spomdp
