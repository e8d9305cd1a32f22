#include "spomdp/model.hpp"

#include "spomdp/linalg.hpp"
#include "spomdp/rng.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <queue>
#include <sstream>

namespace spomdp {

namespace {

std::string fmt_index(std::initializer_list<int> idx) {
  std::ostringstream os;
  os << '(';
  bool first = true;
  for (int i : idx) {
    if (!first) os << ", ";
    os << i;
    first = false;
  }
  os << ')';
  return os.str();
}

bool finite_nonneg(double x) { return std::isfinite(x) && x >= 0.0; }

}  // namespace

Matrix PomdpModel::transition_slice(int l) const {
  Matrix m(X, X);
  for (int i = 0; i < X; ++i)
    for (int j = 0; j < X; ++j) m(i, j) = T(i, j, l);
  return m;
}

Matrix PomdpModel::mean_rewards() const {
  Matrix rbar = Matrix::Zero(X, A);
  for (int i = 0; i < X; ++i)
    for (int l = 0; l < A; ++l)
      for (int m = 0; m < R; ++m) rbar(i, l) += reward_values(m) * Gamma(i, l, m);
  return rbar;
}

MemorylessPolicy MemorylessPolicy::uniform(int Y, int A) {
  return MemorylessPolicy{Matrix::Constant(Y, A, 1.0 / A)};
}

std::vector<std::string> validate_model(const PomdpModel& m) {
  std::vector<std::string> issues;
  if (m.X < 1 || m.Y < 1 || m.A < 1 || m.R < 1) {
    issues.push_back("all cardinalities must be positive");
    return issues;
  }
  if (m.T.dims() != std::array<int, 3>{m.X, m.X, m.A}) issues.push_back("T has wrong shape");
  if (m.O.rows() != m.Y || m.O.cols() != m.X) issues.push_back("O has wrong shape");
  if (m.Gamma.dims() != std::array<int, 3>{m.X, m.A, m.R}) issues.push_back("Gamma has wrong shape");
  if (m.reward_values.size() != m.R) issues.push_back("reward_values has wrong length");
  if (!issues.empty()) return issues;

  for (int i = 0; i < m.X; ++i)
    for (int l = 0; l < m.A; ++l) {
      double s = 0.0;
      bool nonneg = true;
      for (int j = 0; j < m.X; ++j) {
        s += m.T(i, j, l);
        nonneg = nonneg && finite_nonneg(m.T(i, j, l));
      }
      if (!nonneg) issues.push_back("T fiber " + fmt_index({i, l}) + " has a negative entry");
      if (std::abs(s - 1.0) > kStochasticTol)
        issues.push_back("T fiber " + fmt_index({i, l}) + " sums to " + std::to_string(s));
    }
  for (int i = 0; i < m.X; ++i) {
    const double s = m.O.col(i).sum();
    bool nonneg = true;
    for (int n = 0; n < m.Y; ++n) nonneg = nonneg && finite_nonneg(m.O(n, i));
    if (!nonneg) issues.push_back("O column " + std::to_string(i) + " has a negative entry");
    if (std::abs(s - 1.0) > kStochasticTol)
      issues.push_back("O column " + std::to_string(i) + " sums to " + std::to_string(s));
  }
  for (int i = 0; i < m.X; ++i)
    for (int l = 0; l < m.A; ++l) {
      double s = 0.0;
      bool nonneg = true;
      for (int r = 0; r < m.R; ++r) {
        s += m.Gamma(i, l, r);
        nonneg = nonneg && finite_nonneg(m.Gamma(i, l, r));
      }
      if (!nonneg) issues.push_back("Gamma fiber " + fmt_index({i, l}) + " has a negative entry");
      if (std::abs(s - 1.0) > kStochasticTol)
        issues.push_back("Gamma fiber " + fmt_index({i, l}) + " sums to " + std::to_string(s));
    }
  for (int r = 0; r < m.R; ++r)
    if (!finite_nonneg(m.reward_values(r)))
      issues.push_back("reward value " + std::to_string(r) + " is negative");
  if (m.X > m.Y) issues.push_back("X > Y: observation matrix cannot have full column rank");
  const int rank = numerical_rank(m.O, kRankTol);
  if (rank < m.X)
    issues.push_back("O is rank deficient: numerical rank " + std::to_string(rank) + " < X = " +
                     std::to_string(m.X));
  return issues;
}

std::vector<std::string> validate_policy(const MemorylessPolicy& p) {
  std::vector<std::string> issues;
  if (p.Pi.size() == 0) {
    issues.push_back("policy table is empty");
    return issues;
  }
  for (int n = 0; n < p.Y(); ++n) {
    const double s = p.Pi.row(n).sum();
    if (std::abs(s - 1.0) > kStochasticTol)
      issues.push_back("policy row " + std::to_string(n) + " sums to " + std::to_string(s));
  }
  if (!(p.pi_min() > 0.0)) issues.push_back("policy has a non-positive entry (pi_min must be > 0)");
  return issues;
}

void check_compatible(const PomdpModel& model, const MemorylessPolicy& policy) {
  if (policy.Y() != model.Y || policy.A() != model.A)
    throw DimensionError("policy is " + std::to_string(policy.Y()) + "x" +
                         std::to_string(policy.A()) + " but model has Y=" +
                         std::to_string(model.Y) + ", A=" + std::to_string(model.A));
}

MarkovChain induced_chain(const PomdpModel& model, const MemorylessPolicy& policy) {
  check_compatible(model, policy);
  // q(i, l) = sum_y f_pi(l | y) f_O(y | i)
  const Matrix q = model.O.transpose() * policy.Pi;
  Matrix P = Matrix::Zero(model.X, model.X);
  for (int l = 0; l < model.A; ++l)
    for (int i = 0; i < model.X; ++i)
      for (int j = 0; j < model.X; ++j) P(i, j) += q(i, l) * model.T(i, j, l);
  return MarkovChain{P};
}

ErgodicityReport check_ergodicity(const MarkovChain& chain) {
  const int n = chain.size();
  ErgodicityReport report;
  if (n == 0) return report;
  auto reach = [&](bool transpose) {
    std::vector<int> level(n, -1);
    std::queue<int> q;
    level[0] = 0;
    q.push(0);
    while (!q.empty()) {
      const int u = q.front();
      q.pop();
      for (int v = 0; v < n; ++v) {
        const double w = transpose ? chain.P(v, u) : chain.P(u, v);
        if (w > kZeroTol && level[v] < 0) {
          level[v] = level[u] + 1;
          q.push(v);
        }
      }
    }
    return level;
  };
  const std::vector<int> fwd = reach(false);
  const std::vector<int> bwd = reach(true);
  report.irreducible = std::all_of(fwd.begin(), fwd.end(), [](int x) { return x >= 0; }) &&
                       std::all_of(bwd.begin(), bwd.end(), [](int x) { return x >= 0; });
  if (!report.irreducible) return report;
  int g = 0;
  for (int u = 0; u < n; ++u)
    for (int v = 0; v < n; ++v)
      if (chain.P(u, v) > kZeroTol) g = std::gcd(g, std::abs(fwd[u] + 1 - fwd[v]));
  report.period = g;
  return report;
}

Vector stationary_distribution(const MarkovChain& chain) {
  const int n = chain.size();
  if (n == 0) throw DimensionError("stationary_distribution: empty chain");
  const ErgodicityReport er = check_ergodicity(chain);
  if (!er.irreducible) throw NotErgodicError("induced Markov chain is reducible");
  if (er.period != 1)
    throw NotErgodicError("induced Markov chain is periodic with period " + std::to_string(er.period));

  Vector w;
  constexpr int kDirectLimit = 2000;
  if (n <= kDirectLimit) {
    // (P^T - I) w = 0 with the last equation replaced by sum(w) = 1.
    Matrix system = chain.P.transpose() - Matrix::Identity(n, n);
    system.row(n - 1).setOnes();
    Vector rhs = Vector::Zero(n);
    rhs(n - 1) = 1.0;
    w = system.fullPivLu().solve(rhs);
  } else {
    w = Vector::Constant(n, 1.0 / n);
    for (int it = 0; it < 100000; ++it) {
      Vector next = chain.P.transpose() * w;
      next /= next.sum();
      const double diff = (next - w).lpNorm<Eigen::Infinity>();
      w = next;
      if (diff < 1e-15) break;
    }
  }
  for (int i = 0; i < n; ++i)
    if (w(i) < 0.0 && w(i) > -1e-14) w(i) = 0.0;
  w /= w.sum();
  if (!(w.minCoeff() > 0.0))
    throw NotErgodicError("stationary distribution has a non-positive entry");
  return w;
}

Vector action_given_state(const PomdpModel& model, const MemorylessPolicy& policy, int l) {
  check_compatible(model, policy);
  if (l < 0 || l >= model.A) throw DimensionError("action index out of range");
  return model.O.transpose() * policy.Pi.col(l);
}

Vector action_conditional_distribution(const PomdpModel& model, const MemorylessPolicy& policy,
                                       int l) {
  const Vector omega = stationary_distribution(induced_chain(model, policy));
  const Vector p = action_given_state(model, policy, l);
  Vector w = omega.cwiseProduct(p);
  const double total = w.sum();
  if (!(total > 0.0)) throw DegenerateError("action " + std::to_string(l) + " has zero probability");
  return w / total;
}

double action_probability(const PomdpModel& model, const MemorylessPolicy& policy, int l) {
  const Vector omega = stationary_distribution(induced_chain(model, policy));
  return omega.dot(action_given_state(model, policy, l));
}

double expected_average_reward(const PomdpModel& model, const MemorylessPolicy& policy) {
  const Vector omega = stationary_distribution(induced_chain(model, policy));
  const Matrix q = model.O.transpose() * policy.Pi;  // p(a | x)
  const Matrix rbar = model.mean_rewards();
  double eta = 0.0;
  for (int x = 0; x < model.X; ++x) eta += omega(x) * q.row(x).dot(rbar.row(x));
  return eta;
}

Trajectory simulate(const PomdpModel& model, const MemorylessPolicy& policy,
                    const SimulationOptions& options) {
  check_compatible(model, policy);
  Vector initial = options.initial;
  if (initial.size() == 0) initial = Vector::Constant(model.X, 1.0 / model.X);
  if (initial.size() != model.X) throw ValidationError("initial distribution has wrong length");
  if (initial.minCoeff() < 0.0 || std::abs(initial.sum() - 1.0) > 1e-10)
    throw ValidationError("initial distribution is not a probability vector");

  // Flattened per-context weight tables so the inner loop only does lookups.
  std::vector<double> obs(static_cast<std::size_t>(model.X) * model.Y);
  for (int x = 0; x < model.X; ++x)
    for (int n = 0; n < model.Y; ++n) obs[x * model.Y + n] = model.O(n, x);
  std::vector<double> act(static_cast<std::size_t>(model.Y) * model.A);
  for (int n = 0; n < model.Y; ++n)
    for (int l = 0; l < model.A; ++l) act[n * model.A + l] = policy.Pi(n, l);
  std::vector<double> rew(static_cast<std::size_t>(model.X) * model.A * model.R);
  std::vector<double> next(static_cast<std::size_t>(model.X) * model.A * model.X);
  for (int x = 0; x < model.X; ++x)
    for (int l = 0; l < model.A; ++l) {
      for (int m = 0; m < model.R; ++m) rew[(x * model.A + l) * model.R + m] = model.Gamma(x, l, m);
      for (int j = 0; j < model.X; ++j) next[(x * model.A + l) * model.X + j] = model.T(x, j, l);
    }

  Trajectory traj;
  traj.seed = options.seed;
  traj.steps.resize(options.steps);
  if (options.log_hidden) traj.hidden_states.emplace(options.steps);

  Rng rng(options.seed);
  int x = rng.categorical(initial.data(), model.X);
  for (std::size_t t = 0; t < options.steps; ++t) {
    const int y = rng.categorical(&obs[x * model.Y], model.Y);
    const int a = rng.categorical(&act[y * model.A], model.A);
    const int r = rng.categorical(&rew[(x * model.A + a) * model.R], model.R);
    traj.steps[t] = Step{y, a, r};
    if (options.log_hidden) (*traj.hidden_states)[t] = x;
    x = rng.categorical(&next[(x * model.A + a) * model.X], model.X);
  }
  return traj;
}

Contraction contraction_coefficients(const MarkovChain& chain, std::optional<double> G_override,
                                     std::optional<double> theta_override) {
  const int n = chain.size();
  Contraction c;
  double theta = 0.0;
  for (int a = 0; a < n; ++a)
    for (int b = a + 1; b < n; ++b)
      theta = std::max(theta, 0.5 * (chain.P.row(a) - chain.P.row(b)).lpNorm<1>());
  c.theta = std::min(theta, 1.0);
  c.G = 1.0;
  if (c.theta >= 1.0 - 1e-15) {
    c.theta = 1.0;
    c.contracts = false;
    c.warning = "no one-step contraction (Dobrushin coefficient is 1); supply G and theta";
  }
  if (G_override) {
    if (!(*G_override >= 1.0)) throw ValidationError("G override must be >= 1");
    c.G = *G_override;
    c.overridden = true;
  }
  if (theta_override) {
    if (!(*theta_override >= 0.0 && *theta_override < 1.0))
      throw ValidationError("theta override must lie in [0, 1)");
    c.theta = *theta_override;
    c.contracts = true;
    c.overridden = true;
    c.warning.clear();
  }
  return c;
}

}  // namespace spomdp
