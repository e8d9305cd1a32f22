#include "spomdp/moments.hpp"

#include "spomdp/kernels.hpp"
#include "spomdp/linalg.hpp"

namespace spomdp {

const Matrix& CovarianceSet::get(int nu, int nu_prime) const {
  const int key = nu * 10 + nu_prime;
  switch (key) {
    case 12: return K12;
    case 21: return K21;
    case 31: return K31;
    case 13: return K13;
    case 32: return K32;
    case 23: return K23;
    default: throw DimensionError("covariance pair must be two distinct views in {1,2,3}");
  }
}

Matrix empirical_covariance(const ActionViewSamples& samples, const ViewEncoding& enc, int nu,
                            int nu_prime) {
  if (samples.count() == 0)
    throw InsufficientSamplesError("action " + std::to_string(samples.action) +
                                   " has no samples (N(l) = 0)");
  Matrix k = kernels::cooccurrence(samples.triples, {}, nu, nu_prime, enc.dim(nu), enc.dim(nu_prime));
  return k / static_cast<double>(samples.count());
}

CovarianceSet empirical_covariances(const ActionViewSamples& samples, const ViewEncoding& enc) {
  CovarianceSet c;
  c.action = samples.action;
  c.samples = samples.count();
  c.K12 = empirical_covariance(samples, enc, 1, 2);
  c.K13 = empirical_covariance(samples, enc, 1, 3);
  c.K23 = empirical_covariance(samples, enc, 2, 3);
  c.K21 = c.K12.transpose();
  c.K31 = c.K13.transpose();
  c.K32 = c.K23.transpose();
  return c;
}

CovarianceSet covariances_from_views(const ViewMatrices& views, const Vector& weights) {
  const auto d = weights.asDiagonal();
  CovarianceSet c;
  c.action = views.action;
  c.K12 = views.V1 * d * views.V2.transpose();
  c.K13 = views.V1 * d * views.V3.transpose();
  c.K23 = views.V2 * d * views.V3.transpose();
  c.K21 = c.K12.transpose();
  c.K31 = c.K13.transpose();
  c.K32 = c.K23.transpose();
  return c;
}

Matrix exact_covariance(const PomdpModel& model, const MemorylessPolicy& policy, int l, int nu,
                        int nu_prime) {
  const ViewMatrices views = view_matrices_unchecked(model, policy, l);
  const Vector w = action_conditional_distribution(model, policy, l);
  return views.view(nu) * w.asDiagonal() * views.view(nu_prime).transpose();
}

CovarianceSet exact_covariances(const PomdpModel& model, const MemorylessPolicy& policy, int l) {
  const ViewMatrices views = view_matrices_unchecked(model, policy, l);
  return covariances_from_views(views, action_conditional_distribution(model, policy, l));
}

SymmetrizationOperators symmetrization_operators(const CovarianceSet& cov, int X) {
  SymmetrizationOperators ops;
  ops.first = cov.K32 * truncated_pinv(cov.K12, X, "K12").pinv;
  ops.second = cov.K31 * truncated_pinv(cov.K21, X, "K21").pinv;
  return ops;
}

std::vector<ModifiedView> symmetrize(const ActionViewSamples& samples,
                                     const SymmetrizationOperators& ops) {
  std::vector<ModifiedView> out;
  out.reserve(samples.count());
  for (const ViewTriple& t : samples.triples)
    out.push_back(ModifiedView{ops.first.col(t.s1), ops.second.col(t.s2)});
  return out;
}

MomentPair weighted_moments(const SymmetrizationOperators& ops, std::span<const ViewTriple> triples,
                            std::span<const double> weights, int d3) {
  MomentPair mp;
  const Matrix k12 = kernels::cooccurrence(triples, weights, 1, 2, static_cast<int>(ops.first.cols()),
                                           static_cast<int>(ops.second.cols()));
  mp.M2 = ops.first * k12 * ops.second.transpose();
  mp.M3 = kernels::third_moment(ops.first, ops.second, triples, weights, d3);
  mp.samples = triples.size();
  return mp;
}

MomentPair empirical_moments(const SymmetrizationOperators& ops, const ActionViewSamples& samples,
                             int d3) {
  if (samples.count() == 0)
    throw InsufficientSamplesError("action " + std::to_string(samples.action) +
                                   " has no samples (N(l) = 0)");
  MomentPair mp = weighted_moments(ops, samples.triples, {}, d3);
  const double inv = 1.0 / static_cast<double>(samples.count());
  mp.M2 *= inv;
  mp.M3 *= inv;
  mp.action = samples.action;
  return mp;
}

MomentPair moments_from_modified(std::span<const ModifiedView> modified,
                                 std::span<const int> third_view, int d3) {
  if (modified.empty()) throw InsufficientSamplesError("no modified views");
  if (modified.size() != third_view.size())
    throw DimensionError("modified views and third views differ in length");
  MomentPair mp;
  mp.samples = modified.size();
  mp.M2 = Matrix::Zero(d3, d3);
  mp.M3 = Tensor3(d3, d3, d3);
  for (std::size_t p = 0; p < modified.size(); ++p) {
    const Vector& a = modified[p].first;
    const Vector& b = modified[p].second;
    mp.M2.noalias() += a * b.transpose();
    for (int i = 0; i < d3; ++i)
      for (int j = 0; j < d3; ++j) mp.M3(i, j, third_view[p]) += a(i) * b(j);
  }
  const double inv = 1.0 / static_cast<double>(modified.size());
  mp.M2 *= inv;
  mp.M3 *= inv;
  return mp;
}

MomentPair population_moments(const SymmetrizationOperators& ops, const ViewMatrices& views,
                              const Vector& weights) {
  const int d3 = static_cast<int>(views.V3.rows());
  MomentPair mp;
  mp.action = views.action;
  const Matrix mod1 = ops.first * views.V1;   // d3 x X
  const Matrix mod2 = ops.second * views.V2;  // d3 x X
  mp.M2 = mod1 * weights.asDiagonal() * mod2.transpose();
  mp.M3 = Tensor3(d3, d3, d3);
  for (int i = 0; i < weights.size(); ++i)
    mp.M3 += outer3(mod1.col(i), mod2.col(i), views.V3.col(i), weights(i));
  return mp;
}

MomentPair moments_from_components(const Matrix& columns, const Vector& weights) {
  const int d = static_cast<int>(columns.rows());
  MomentPair mp;
  mp.M2 = columns * weights.asDiagonal() * columns.transpose();
  mp.M3 = Tensor3(d, d, d);
  for (int i = 0; i < weights.size(); ++i) {
    const Vector mu = columns.col(i);
    mp.M3 += outer3(mu, mu, mu, weights(i));
  }
  return mp;
}

MomentPair exact_moments(const PomdpModel& model, const MemorylessPolicy& policy, int l) {
  const ViewMatrices views = view_matrices_unchecked(model, policy, l);
  MomentPair mp = moments_from_components(views.V3, action_conditional_distribution(model, policy, l));
  mp.action = l;
  return mp;
}

}  // namespace spomdp
