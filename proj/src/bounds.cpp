#include "spomdp/bounds.hpp"

#include "spomdp/linalg.hpp"
#include "spomdp/recovery.hpp"

#include <algorithm>
#include <cmath>

namespace spomdp {

namespace {

void require_positive(double x, const char* name) {
  if (!(x > 0.0) || !std::isfinite(x))
    throw ValidationError(std::string(name) + " must be positive and finite");
}

}  // namespace

double ActionGaps::min_view_sigma_sq() const {
  const double s = std::min({sigma_min_V1, sigma_min_V2, sigma_min_V3});
  return s * s;
}

void check_gaps(const ActionGaps& g) {
  const std::pair<const char*, double> items[] = {
      {"sigma_X(K12)", g.sigma12},       {"sigma_X(K13)", g.sigma13},
      {"sigma_X(K23)", g.sigma23},       {"sigma_min(V1)", g.sigma_min_V1},
      {"sigma_min(V2)", g.sigma_min_V2}, {"sigma_min(V3)", g.sigma_min_V3},
      {"omega_min", g.omega_min},        {"pi_min", g.pi_min},
  };
  for (const auto& [name, value] : items)
    if (!(value > kGapFloor))
      throw DegenerateError("degenerate instance for action " + std::to_string(g.action) + ": " +
                            name + " = " + std::to_string(value));
}

ActionGaps action_gaps(int action, const CovarianceSet& cov, const Matrix& V1, const Matrix& V2,
                       const Matrix& V3, const Vector& weights, const MemorylessPolicy& policy,
                       int X) {
  ActionGaps g;
  g.action = action;
  g.sigma12 = kth_singular_value(cov.K12, X);
  g.sigma13 = kth_singular_value(cov.K13, X);
  g.sigma23 = kth_singular_value(cov.K23, X);
  g.sigma_min_V1 = kth_singular_value(V1, X);
  g.sigma_min_V2 = kth_singular_value(V2, X);
  g.sigma_min_V3 = kth_singular_value(V3, X);
  g.omega_min = weights.minCoeff();
  g.pi_min = policy.pi_min(action);
  return g;
}

SpectralGaps compute_gaps(const PomdpModel& model, const MemorylessPolicy& policy) {
  SpectralGaps gaps;
  gaps.mode = "oracle";
  gaps.sigma_min_O = kth_singular_value(model.O, model.X);
  if (!(gaps.sigma_min_O > kGapFloor))
    throw DegenerateError("degenerate instance: sigma_min(O) = " + std::to_string(gaps.sigma_min_O));
  if (model.X >= 2) gaps.d_O = separability(model.O);
  for (int l = 0; l < model.A; ++l) {
    const ViewMatrices views = view_matrices_unchecked(model, policy, l);
    const Vector w = action_conditional_distribution(model, policy, l);
    const CovarianceSet cov = covariances_from_views(views, w);
    ActionGaps g = action_gaps(l, cov, views.V1, views.V2, views.V3, w, policy, model.X);
    check_gaps(g);
    gaps.actions.push_back(g);
  }
  return gaps;
}

double compute_lambda(const LambdaInputs& in) {
  require_positive(in.sigma_min_O, "sigma_min(O)");
  require_positive(in.pi_min, "pi_min");
  require_positive(in.sigma13, "sigma13");
  require_positive(in.omega_min, "omega_min");
  require_positive(in.min_view_sigma_sq, "min view sigma^2");
  return in.sigma_min_O * in.pi_min * in.pi_min * in.sigma13 *
         std::pow(in.omega_min * in.min_view_sigma_sq, 1.5);
}

double compute_lambda(const SpectralGaps& gaps, int l) {
  const ActionGaps& g = gaps.actions.at(l);
  return compute_lambda(LambdaInputs{gaps.sigma_min_O, g.pi_min, g.sigma13, g.omega_min,
                                     g.min_view_sigma_sq()});
}

ConfidenceBounds confidence_bounds(double lambda, double samples, double delta, int Y, int R, int X,
                                   const BoundConstants& c) {
  require_positive(lambda, "lambda");
  if (!(samples >= 1.0)) throw ValidationError("confidence_bounds: N(l) must be at least 1");
  if (!(delta > 0.0 && delta < 1.0)) throw ValidationError("confidence_bounds: delta must lie in (0,1)");
  if (Y < 1 || R < 1 || X < 1) throw ValidationError("confidence_bounds: cardinalities must be positive");
  const double base = std::sqrt(static_cast<double>(Y) * R * std::log(1.0 / delta) / samples);
  ConfidenceBounds b;
  b.B_O = c.C_O / lambda * base;
  b.B_R = c.C_R / lambda * base;
  b.B_T = c.C_T / lambda * base * X;
  return b;
}

SampleSizeThreshold sample_size_threshold(const SpectralGaps& gaps, int l, double G, double theta,
                                          double Theta, int Y, int A, int R, double delta,
                                          const BoundConstants& constants) {
  if (!(theta >= 0.0 && theta < 1.0)) throw ValidationError("sample_size_threshold: theta must lie in [0,1)");
  if (!(G >= 1.0)) throw ValidationError("sample_size_threshold: G must be >= 1");
  require_positive(Theta, "Theta");
  require_positive(delta, "delta");
  const ActionGaps& g = gaps.actions.at(l);
  require_positive(g.sigma31(), "sigma31");

  SampleSizeThreshold s;
  s.log_factor = std::log(2.0 * (static_cast<double>(Y) * Y + static_cast<double>(A) * Y * R) / delta);
  if (!(s.log_factor > 0.0))
    throw ValidationError("sample_size_threshold: delta too large for a positive log factor");

  const double lambda = compute_lambda(gaps, l);
  s.spectral_branch = 4.0 / (g.sigma31() * g.sigma31());
  if (gaps.d_O) {
    require_positive(*gaps.d_O, "d_O");
    s.separation_branch = 16.0 * constants.C_O * constants.C_O * Y * R /
                          (lambda * lambda * (*gaps.d_O) * (*gaps.d_O));
  }
  const double mixing =
      G * (2.0 * std::sqrt(2.0) + 1.0) / (1.0 - theta) / (g.omega_min * g.min_view_sigma_sq());
  s.mixing_branch = mixing * mixing * Theta;
  s.value = std::max({s.spectral_branch, s.separation_branch, s.mixing_branch}) * s.log_factor;
  return s;
}

double hmm_concentration_bound(double G, double theta, double c, double n, int d1, int d2,
                               double delta) {
  if (!(G >= 1.0)) throw ValidationError("concentration bound: G must be >= 1");
  if (!(theta >= 0.0 && theta < 1.0)) throw ValidationError("concentration bound: theta must lie in [0,1)");
  require_positive(c, "c");
  require_positive(n, "n");
  if (d1 < 1 || d2 < 1) throw ValidationError("concentration bound: dimensions must be positive");
  if (!(delta > 0.0 && delta < 1.0)) throw ValidationError("concentration bound: delta must lie in (0,1)");
  const double lead = G * (1.0 + 1.0 / (std::sqrt(2.0) * c * std::pow(n, 1.5))) / (1.0 - theta);
  return lead * std::sqrt(8.0 * c * c * n * std::log((d1 + d2) / delta));
}

double pomdp_concentration_bound(double G, double theta, double c, std::size_t samples, int d1,
                                 int d2, double delta) {
  return hmm_concentration_bound(G, theta, c, static_cast<double>(samples), d1, d2, delta);
}

}  // namespace spomdp
