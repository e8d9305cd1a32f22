// One PASS/FAIL line per acceptance criterion; nonzero exit on any failure.

#include "support.hpp"

#include "spomdp/bounds.hpp"
#include "spomdp/moments.hpp"
#include "spomdp/pipeline.hpp"
#include "spomdp/recovery.hpp"
#include "spomdp/sweep.hpp"
#include "spomdp/tensor_decomp.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>

using namespace spomdp;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, double a) {
  char buf[128];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

int failures = 0;

void criterion(int id, const char* name, double limit_s, const std::function<Outcome()>& body) {
  const auto start = std::chrono::steady_clock::now();
  Outcome o;
  try {
    o = body();
  } catch (const std::exception& e) {
    o = {false, std::string("exception: ") + e.what()};
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  if (secs >= limit_s) {
    o.pass = false;
    o.detail += fmt("; over the %.0f s limit", limit_s);
  }
  if (!o.pass) ++failures;
  std::printf("%s %d %s: %s [%.2f s]\n", o.pass ? "PASS" : "FAIL", id, name, o.detail.c_str(), secs);
  std::fflush(stdout);
}

double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

bool is_density(const Eigen::Ref<const Vector>& v) {
  return v.minCoeff() >= 0.0 && std::abs(v.sum() - 1.0) <= 1e-9 && v.allFinite();
}

Outcome exact_pipeline() {
  const Instance f = fixtures::standard_fixture();
  if (!(separability(f.model.O) >= 0.5)) return {false, "fixture separability below 0.5"};
  EstimatorOptions o;
  o.states = f.model.X;
  const EstimationResult r = estimate_exact(f.model, f.policy, o);
  if (!r.ok()) return {false, "exact pipeline reported a failed action"};
  const ErrorReport e = evaluate_errors(r.estimate, f.model);
  const double worst = std::max({e.max_err_O, e.max_err_R, e.max_err_T});
  return {worst <= 1e-6, fmt("max err O %.2e", e.max_err_O) + fmt(", R %.2e", e.max_err_R) +
                             fmt(", T %.2e", e.max_err_T)};
}

Outcome moment_identities() {
  std::vector<Instance> cases{fixtures::standard_fixture()};
  for (std::uint64_t s = 0; s < 4; ++s) cases.push_back(fixtures::random_instance(40 + s));
  double worst_sum = 0.0, worst_sym = 0.0;
  for (const Instance& inst : cases) {
    for (int l = 0; l < inst.model.A; ++l) {
      const MomentPair m = exact_moments(inst.model, inst.policy, l);
      const ViewMatrices v = true_view_matrices(inst.model, inst.policy, l);
      const Vector w = oracle::bayes_conditional(inst.model, inst.policy, l);
      const int d3 = static_cast<int>(v.V3.rows());

      Matrix M2 = Matrix::Zero(d3, d3);
      Tensor3 M3(d3, d3, d3);
      for (int i = 0; i < inst.model.X; ++i)
        for (int a = 0; a < d3; ++a)
          for (int b = 0; b < d3; ++b) {
            M2(a, b) += w(i) * v.V3(a, i) * v.V3(b, i);
            for (int c = 0; c < d3; ++c) M3(a, b, c) += w(i) * v.V3(a, i) * v.V3(b, i) * v.V3(c, i);
          }
      worst_sum = std::max({worst_sum, (m.M2 - M2).cwiseAbs().maxCoeff(), m.M3.max_abs_diff(M3)});

      // symmetrized views averaged over the exact joint law of (s1, s2, s3)
      const SymmetrizationOperators ops =
          symmetrization_operators(exact_covariances(inst.model, inst.policy, l), inst.model.X);
      std::vector<ViewTriple> triples;
      std::vector<double> weights;
      for (int s1 = 0; s1 < v.V1.rows(); ++s1)
        for (int s2 = 0; s2 < v.V2.rows(); ++s2)
          for (int s3 = 0; s3 < d3; ++s3) {
            double p = 0.0;
            for (int i = 0; i < inst.model.X; ++i) p += w(i) * v.V1(s1, i) * v.V2(s2, i) * v.V3(s3, i);
            if (p == 0.0) continue;
            triples.push_back({s1, s2, s3});
            weights.push_back(p);
          }
      const MomentPair sym = weighted_moments(ops, triples, weights, d3);
      worst_sym = std::max({worst_sym, (sym.M2 - m.M2).cwiseAbs().maxCoeff(), sym.M3.max_abs_diff(m.M3)});
    }
  }
  return {worst_sum <= 1e-10 && worst_sym <= 1e-10,
          fmt("component sum %.2e", worst_sum) + fmt(", symmetrized %.2e", worst_sym)};
}

Outcome tensor_oracle() {
  int recovered = 0;
  for (int trial = 0; trial < 100; ++trial) {
    Rng rng = Rng::derived(2024, {static_cast<std::uint64_t>(trial)});
    const int k = 1 + trial % 5;
    const fixtures::OrthogonalTensor t = fixtures::random_orthogonal_tensor(rng, k);
    PowerIterationOptions opts;
    opts.seed = static_cast<std::uint64_t>(trial);
    bool ok = true;
    try {
      const EigenComponents c = tensor_power_iteration(t.tensor, k, opts);
      std::vector<bool> used(k, false);
      for (int j = 0; j < k && ok; ++j) {
        int match = -1;
        for (int i = 0; i < k; ++i) {
          if (used[i]) continue;
          const double d = std::min((c.vectors.col(j) - t.vectors.col(i)).norm(),
                                    (c.vectors.col(j) + t.vectors.col(i)).norm());
          if (d <= 1e-6) match = i;
        }
        if (match < 0) ok = false;
        else used[match] = true;
      }
    } catch (const Error&) {
      ok = false;
    }
    recovered += ok;
  }
  return {recovered >= 99, std::to_string(recovered) + "/100 tensors recovered"};
}

Outcome convergence_rate() {
  const Instance f = fixtures::standard_fixture();
  SweepConfig cfg;
  cfg.model = f.model;
  cfg.policy = f.policy;
  for (int e = 12; e <= 18; ++e) cfg.lengths.push_back(std::size_t{1} << e);
  for (std::uint64_t s = 1; s <= 10; ++s) cfg.seeds.push_back(s);
  cfg.options.states = f.model.X;
  const SweepResult r = run_sweep(cfg);
  const SweepSummary& s = r.summary;
  auto in_range = [](double x) { return std::isfinite(x) && x >= -0.65 && x <= -0.35; };
  return {in_range(s.slope_O.slope) && in_range(s.slope_R.slope) && in_range(s.slope_T.slope),
          fmt("slopes O %.3f", s.slope_O.slope) + fmt(", R %.3f", s.slope_R.slope) +
              fmt(", T %.3f", s.slope_T.slope) + ", failed cells " + std::to_string(s.failed_cells)};
}

Matrix noisy_columns(Rng& rng, const Matrix& O, double lo, double hi) {
  Matrix out = O;
  for (int i = 0; i < O.cols(); ++i) {
    Vector z(O.rows());
    for (int n = 0; n < O.rows(); ++n) z(n) = rng.normal();
    z.array() -= z.mean();
    out.col(i) += z * ((lo + (hi - lo) * rng.uniform()) / z.lpNorm<1>());
  }
  return out;
}

Outcome alignment() {
  int small_ok = 0, large_wrong = 0, large_flagged = 0;
  for (int trial = 0; trial < 100; ++trial) {
    const int X = 2 + trial % 4;
    const Instance inst = fixtures::random_instance(3000 + trial, X, X + 3);
    const Matrix& O = inst.model.O;
    const double d_O = separability(O);
    Rng rng = Rng::derived(77, {static_cast<std::uint64_t>(trial)});
    std::vector<int> sigma(X);
    for (int i = 0; i < X; ++i) sigma[i] = i;
    for (int i = X - 1; i > 0; --i) std::swap(sigma[i], sigma[rng.next() % (i + 1)]);
    // estimate column i is reference column sigma[i]
    Matrix shuffled(O.rows(), X);
    for (int i = 0; i < X; ++i) shuffled.col(i) = O.col(sigma[i]);

    const auto small = align_permutations({O, noisy_columns(rng, shuffled, 0.0, 0.999 * d_O / 4)}, 0);
    small_ok += small[1].permutation == sigma;

    const auto large = align_permutations({O, noisy_columns(rng, shuffled, 1.001 * d_O, 2.0 * d_O)}, 0);
    if (large[1].permutation != sigma) {
      ++large_wrong;
      large_flagged += large[1].warning;
    }
  }
  return {small_ok == 100 && large_flagged == large_wrong,
          std::to_string(small_ok) + "/100 correct below d_O/4; " + std::to_string(large_flagged) + "/" +
              std::to_string(large_wrong) + " wrong alignments flagged above d_O"};
}

Outcome simulator() {
  const Instance f = fixtures::standard_fixture();
  SimulationOptions so;
  so.steps = 100000;
  so.seed = 7;
  so.log_hidden = true;
  const Trajectory t = simulate(f.model, f.policy, so);
  Vector freq = Vector::Zero(f.model.X);
  for (int x : *t.hidden_states) freq(x) += 1.0;
  freq /= static_cast<double>(t.size());
  const Vector omega = oracle::stationary_by_iteration(oracle::induced_chain(f.model, f.policy));
  const double tv = 0.5 * (freq - omega).lpNorm<1>();
  std::size_t total = 0;
  for (int l = 0; l < f.model.A; ++l) total += collect_views(t, l, encoding_for(f.model)).count();
  return {tv <= 0.02 && total == so.steps - 2,
          fmt("TV %.4f", tv) + ", sum N(l) = " + std::to_string(total)};
}

Outcome bound_formulas() {
  double worst = 0.0;
  const ConfidenceBounds b = confidence_bounds(1.0, 1.0, std::exp(-1.0), 1, 1, 2);
  worst = std::max({worst, rel(b.B_O, 1.0), rel(b.B_T, 2.0)});

  SpectralGaps g;
  g.sigma_min_O = 1.0;
  g.d_O = 4.0;
  ActionGaps a;
  a.sigma12 = a.sigma13 = a.sigma23 = 0.5;
  a.sigma_min_V1 = a.sigma_min_V2 = a.sigma_min_V3 = 1.0;
  a.omega_min = 1.0;
  a.pi_min = 1.0;
  g.actions.push_back(a);
  const SampleSizeThreshold s = sample_size_threshold(g, 0, 1.0, 0.0, 1.0, 1, 1, 1, 4.0 / std::exp(1.0));
  worst = std::max(worst, rel(s.value, 16.0));

  const double c = hmm_concentration_bound(1.0, 0.0, 1.0, 1.0, 1, 1, 2.0 / std::exp(1.0));
  worst = std::max(worst, rel(c, (1.0 + 1.0 / std::sqrt(2.0)) * std::sqrt(8.0)));
  return {worst < 1e-12 && std::abs(c - 4.828) < 1e-3,
          fmt("max relative error %.2e", worst) + fmt(", concentration %.6f", c)};
}

Outcome density_validity() {
  int runs = 0, valid = 0;
  for (int run = 0; run < 50; ++run) {
    const Instance inst = run % 2 == 0 ? fixtures::standard_fixture()
                                       : fixtures::random_instance(5000 + run, 3, 5, 2, 3);
    SimulationOptions so;
    so.steps = 500;
    so.seed = 100 + static_cast<std::uint64_t>(run);
    const Trajectory t = simulate(inst.model, inst.policy, so);
    EstimatorOptions o;
    o.states = inst.model.X;
    o.power.seed = static_cast<std::uint64_t>(run);
    const EstimationResult r = estimate_from_trajectory(inst.policy, t, inst.model.R, o, inst.model.reward_values);
    ++runs;
    const PomdpEstimate& e = r.estimate;
    bool ok = true;
    for (int i = 0; i < e.X; ++i) ok = ok && is_density(e.O.col(i));
    for (const auto& obs : e.action_observations)
      if (obs)
        for (int i = 0; i < e.X; ++i) ok = ok && is_density(obs->col(i));
    for (int i = 0; i < e.X; ++i)
      for (int l = 0; l < e.A; ++l) {
        Vector gam(e.R), tr(e.X);
        for (int m = 0; m < e.R; ++m) gam(m) = e.Gamma(i, l, m);
        for (int j = 0; j < e.X; ++j) tr(j) = e.T(i, j, l);
        ok = ok && is_density(gam) && is_density(tr);
      }
    valid += ok;
  }
  return {valid == runs, std::to_string(valid) + "/" + std::to_string(runs) + " runs emit valid densities"};
}

}  // namespace

int main() {
  criterion(1, "exact-pipeline equivalence", 5, exact_pipeline);
  criterion(2, "moment identities", 1, moment_identities);
  criterion(3, "tensor decomposition oracle", 30, tensor_oracle);
  criterion(4, "convergence rate", 600, convergence_rate);
  criterion(5, "permutation alignment", 10, alignment);
  criterion(6, "simulator fidelity", 5, simulator);
  criterion(7, "bound formulas", 1, bound_formulas);
  criterion(8, "density validity", 60, density_validity);
  std::printf("%d of 8 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
