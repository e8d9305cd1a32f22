#include "spomdp/generator.hpp"

#include "spomdp/linalg.hpp"
#include "spomdp/recovery.hpp"
#include "spomdp/rng.hpp"
#include "spomdp/views.hpp"

namespace spomdp {

namespace {

Vector dirichlet(Rng& rng, int n) {
  Vector v(n);
  for (int i = 0; i < n; ++i) v(i) = rng.exponential() + 1e-300;
  return v / v.sum();
}

PomdpModel draw_model(const GeneratorSpec& spec, Rng& rng) {
  PomdpModel m;
  m.X = spec.X;
  m.Y = spec.Y;
  m.A = spec.A;
  m.R = spec.R;
  m.O.resize(spec.Y, spec.X);
  for (int i = 0; i < spec.X; ++i) m.O.col(i) = dirichlet(rng, spec.Y);
  m.T = Tensor3(spec.X, spec.X, spec.A);
  for (int l = 0; l < spec.A; ++l)
    for (int i = 0; i < spec.X; ++i) {
      const Vector row = dirichlet(rng, spec.X);
      for (int j = 0; j < spec.X; ++j)
        m.T(i, j, l) = (1.0 - spec.transition_mix) * row(j) + spec.transition_mix / spec.X;
    }
  m.Gamma = Tensor3(spec.X, spec.A, spec.R);
  for (int i = 0; i < spec.X; ++i)
    for (int l = 0; l < spec.A; ++l) {
      const Vector row = dirichlet(rng, spec.R);
      for (int r = 0; r < spec.R; ++r) m.Gamma(i, l, r) = row(r);
    }
  m.reward_values = spec.R == 1 ? Vector(Vector::Zero(1)) : Vector(Vector::LinSpaced(spec.R, 0.0, 1.0));
  return m;
}

bool acceptable(const PomdpModel& m, const MemorylessPolicy& policy, const GeneratorSpec& spec,
                Instance& out) {
  if (!validate_model(m).empty()) return false;
  if (!check_ergodicity(induced_chain(m, policy)).ergodic()) return false;
  const double sigma = kth_singular_value(m.O, m.X);
  if (sigma < spec.sigma_O_floor || sigma <= kRankTol) return false;
  std::optional<double> d_O;
  if (m.X >= 2) {
    d_O = separability(m.O);
    if (*d_O < spec.d_O_floor) return false;
  }
  try {
    for (int l = 0; l < m.A; ++l) true_view_matrices(m, policy, l);
  } catch (const Error&) {
    return false;
  }
  out.sigma_min_O = sigma;
  out.d_O = d_O;
  return true;
}

}  // namespace

MemorylessPolicy make_policy(const PolicySpec& spec, int Y, int A, std::uint64_t seed) {
  switch (spec.kind) {
    case PolicySpec::Kind::uniform:
      return MemorylessPolicy::uniform(Y, A);
    case PolicySpec::Kind::random: {
      if (!(spec.pi_min > 0.0 && spec.pi_min <= 1.0 / A + 1e-15))
        throw ValidationError("policy pi_min must lie in (0, 1/A]");
      Rng rng = Rng::derived(seed, {0x706f6c696379ULL});
      MemorylessPolicy p;
      p.Pi.resize(Y, A);
      const double free = std::max(0.0, 1.0 - A * spec.pi_min);
      for (int n = 0; n < Y; ++n) p.Pi.row(n) = (spec.pi_min + free * dirichlet(rng, A).array()).transpose();
      return p;
    }
    case PolicySpec::Kind::explicit_table: {
      MemorylessPolicy p{spec.table};
      if (p.Y() != Y || p.A() != A) throw ValidationError("explicit policy has wrong shape");
      const auto issues = validate_policy(p);
      if (!issues.empty()) throw ValidationError("invalid policy: " + issues.front());
      return p;
    }
  }
  throw ValidationError("unknown policy kind");
}

Instance generate_instance(const GeneratorSpec& spec, std::uint64_t seed) {
  if (spec.X < 1 || spec.Y < 1 || spec.A < 1 || spec.R < 1)
    throw ValidationError("generator: cardinalities must be positive");
  if (spec.X > spec.Y)
    throw RankDeficiencyError("O (X > Y)", spec.Y, spec.X);
  if (!(spec.transition_mix >= 0.0 && spec.transition_mix <= 1.0))
    throw ValidationError("generator: transition_mix must lie in [0,1]");
  if (spec.max_attempts < 1) throw ValidationError("generator: max_attempts must be positive");

  Instance inst;
  inst.policy = make_policy(spec.policy, spec.Y, spec.A, seed);
  Rng rng(seed);
  for (int attempt = 1; attempt <= spec.max_attempts; ++attempt) {
    PomdpModel m = draw_model(spec, rng);
    if (acceptable(m, inst.policy, spec, inst)) {
      inst.model = std::move(m);
      inst.attempts = attempt;
      return inst;
    }
  }
  throw DegenerateError("generator: rejection budget of " + std::to_string(spec.max_attempts) +
                        " attempts exhausted");
}

GeneratorSpec standard_fixture_spec() {
  GeneratorSpec s;
  s.X = 2;
  s.Y = 4;
  s.A = 2;
  s.R = 2;
  s.d_O_floor = 0.5;
  s.sigma_O_floor = 0.1;
  s.policy.kind = PolicySpec::Kind::random;
  s.policy.pi_min = 0.2;
  return s;
}

}  // namespace spomdp
