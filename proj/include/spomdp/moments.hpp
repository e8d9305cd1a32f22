#pragma once

#include "spomdp/model.hpp"
#include "spomdp/views.hpp"

#include <span>
#include <vector>

namespace spomdp {

/// Cross-view second moments K_{nu,nu'} = E[v_nu (x) v_nu'] for one action.
struct CovarianceSet {
  int action = 0;
  std::size_t samples = 0;
  Matrix K12, K21, K31, K13, K32, K23;

  const Matrix& get(int nu, int nu_prime) const;
};

Matrix empirical_covariance(const ActionViewSamples& samples, const ViewEncoding& enc, int nu,
                            int nu_prime);
CovarianceSet empirical_covariances(const ActionViewSamples& samples, const ViewEncoding& enc);

/// V_nu diag(omega^(l)) V_nu'^T.
Matrix exact_covariance(const PomdpModel& model, const MemorylessPolicy& policy, int l, int nu,
                        int nu_prime);
CovarianceSet exact_covariances(const PomdpModel& model, const MemorylessPolicy& policy, int l);
CovarianceSet covariances_from_views(const ViewMatrices& views, const Vector& weights);

/// Linear maps that send the first and second views onto the third view's
/// conditional means:
///   first  = K32 pinv(K12)   (d3 x d1)
///   second = K31 pinv(K21)   (d3 x d2)
/// Views are one-hot, so the modified view of a sample is a column lookup.
struct SymmetrizationOperators {
  Matrix first;
  Matrix second;
};

/// Pseudo-inverses are truncated to rank X; throws RankDeficiencyError naming
/// the offending covariance when its numerical rank is below X.
SymmetrizationOperators symmetrization_operators(const CovarianceSet& cov, int X);

struct ModifiedView {
  Vector first;
  Vector second;
};

std::vector<ModifiedView> symmetrize(const ActionViewSamples& samples,
                                     const SymmetrizationOperators& ops);

struct MomentPair {
  int action = 0;
  std::size_t samples = 0;
  Matrix M2;   // d3 x d3
  Tensor3 M3;  // d3 x d3 x d3
};

/// Sample averages of v~1 (x) v~2 and v~1 (x) v~2 (x) v3, evaluated through
/// the operator columns. Throws InsufficientSamplesError when empty.
MomentPair empirical_moments(const SymmetrizationOperators& ops, const ActionViewSamples& samples,
                             int d3);

/// Same averages computed from materialized modified views.
MomentPair moments_from_modified(std::span<const ModifiedView> modified,
                                 std::span<const int> third_view, int d3);

/// Weighted (not normalized) version; weights are probabilities when the
/// triples enumerate an exact joint distribution.
MomentPair weighted_moments(const SymmetrizationOperators& ops, std::span<const ViewTriple> triples,
                            std::span<const double> weights, int d3);

/// Population moments of the modified views given exact view matrices and
/// per-state weights: C1 K12 C2^T and sum_i w_i (C1 mu1_i) (x) (C2 mu2_i) (x) mu3_i.
MomentPair population_moments(const SymmetrizationOperators& ops, const ViewMatrices& views,
                              const Vector& weights);

/// sum_i omega^(l)(i) mu3_i (x) mu3_i and its third-order analogue.
MomentPair exact_moments(const PomdpModel& model, const MemorylessPolicy& policy, int l);
MomentPair moments_from_components(const Matrix& columns, const Vector& weights);

}  // namespace spomdp
