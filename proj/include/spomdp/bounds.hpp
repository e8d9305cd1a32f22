#pragma once

#include "spomdp/model.hpp"
#include "spomdp/moments.hpp"
#include "spomdp/views.hpp"

#include <optional>
#include <string>
#include <vector>

namespace spomdp {

struct ActionGaps {
  int action = 0;
  /// X-th singular values (descending order) of the covariances.
  double sigma12 = 0.0;
  double sigma13 = 0.0;
  double sigma23 = 0.0;
  double sigma31() const { return sigma13; }
  /// Smallest singular values of the view matrices.
  double sigma_min_V1 = 0.0;
  double sigma_min_V2 = 0.0;
  double sigma_min_V3 = 0.0;
  double omega_min = 0.0;
  /// min_n f_pi(l | e_n)
  double pi_min = 0.0;

  double min_view_sigma_sq() const;
};

struct SpectralGaps {
  /// "oracle" (exact quantities) or "plug-in" (estimates).
  std::string mode = "oracle";
  double sigma_min_O = 0.0;
  /// Undefined for X = 1.
  std::optional<double> d_O;
  std::vector<ActionGaps> actions;
};

inline constexpr double kGapFloor = 1e-12;

/// Throws DegenerateError naming the first quantity at or below 1e-12.
void check_gaps(const ActionGaps& gaps);

/// Gaps of one action from view matrices, covariances, per-state weights.
ActionGaps action_gaps(int action, const CovarianceSet& cov, const Matrix& V1, const Matrix& V2,
                       const Matrix& V3, const Vector& weights, const MemorylessPolicy& policy,
                       int X);

/// Oracle mode: exact view matrices and covariances of the true model.
SpectralGaps compute_gaps(const PomdpModel& model, const MemorylessPolicy& policy);

struct LambdaInputs {
  double sigma_min_O = 1.0;
  double pi_min = 1.0;
  double sigma13 = 1.0;
  double omega_min = 1.0;
  double min_view_sigma_sq = 1.0;
};

/// sigma_min(O) pi_min^2 sigma13 (omega_min min_nu sigma_min(V_nu)^2)^{3/2}
double compute_lambda(const LambdaInputs& in);
double compute_lambda(const SpectralGaps& gaps, int l);

struct BoundConstants {
  double C_O = 1.0;
  double C_R = 1.0;
  double C_T = 1.0;
};

struct ConfidenceBounds {
  double B_O = 0.0;
  double B_R = 0.0;
  double B_T = 0.0;
};

/// B_O = C_O/lambda sqrt(Y R log(1/delta) / N), B_R likewise with C_R,
/// B_T = C_T/lambda sqrt(Y R X^2 log(1/delta) / N).
ConfidenceBounds confidence_bounds(double lambda, double samples, double delta, int Y, int R, int X,
                                   const BoundConstants& constants = {});

struct SampleSizeThreshold {
  double spectral_branch = 0.0;    // 4 / sigma31^2
  double separation_branch = 0.0;  // 16 C_O^2 Y R / (lambda^2 d_O^2)
  double mixing_branch = 0.0;      // (G (2 sqrt2 + 1)/(1 - theta) / (omega_min min sigma^2))^2 Theta
  double log_factor = 0.0;         // log(2 (Y^2 + A Y R) / delta)
  double value = 0.0;
};

/// Minimum N(l) for the bounds to hold. Theta is a caller-supplied constant.
/// Requires theta in [0, 1), G >= 1 and a positive log factor.
SampleSizeThreshold sample_size_threshold(const SpectralGaps& gaps, int l, double G, double theta,
                                          double Theta, int Y, int A, int R, double delta,
                                          const BoundConstants& constants = {});

/// Matrix concentration radius for a c-Lipschitz function of n chain samples:
/// G (1 + 1/(sqrt2 c n^{3/2})) / (1 - theta) sqrt(8 c^2 n log((d1 + d2)/delta)).
double hmm_concentration_bound(double G, double theta, double c, double n, int d1, int d2,
                               double delta);

/// Per-action form: n = N(l).
double pomdp_concentration_bound(double G, double theta, double c, std::size_t samples, int d1,
                                 int d2, double delta);

}  // namespace spomdp
