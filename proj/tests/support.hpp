#pragma once

// Shared fixtures and independent loop-based oracles for the unit tests.
// The oracles deliberately avoid the library's matrix formulations: they
// enumerate joint outcomes directly.

#include "spomdp/generator.hpp"
#include "spomdp/model.hpp"
#include "spomdp/rng.hpp"
#include "spomdp/views.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace fixtures {

using namespace spomdp;

// X=2, Y=3, A=2, R=2 instance with hand-picked densities.
inline PomdpModel small_model() {
  PomdpModel m;
  m.X = 2;
  m.Y = 3;
  m.A = 2;
  m.R = 2;
  m.O.resize(3, 2);
  m.O << 0.6, 0.1,
         0.3, 0.2,
         0.1, 0.7;
  m.T = Tensor3(2, 2, 2);
  m.T(0, 0, 0) = 0.7; m.T(0, 1, 0) = 0.3;
  m.T(1, 0, 0) = 0.4; m.T(1, 1, 0) = 0.6;
  m.T(0, 0, 1) = 0.2; m.T(0, 1, 1) = 0.8;
  m.T(1, 0, 1) = 0.5; m.T(1, 1, 1) = 0.5;
  m.Gamma = Tensor3(2, 2, 2);
  m.Gamma(0, 0, 0) = 0.9; m.Gamma(0, 0, 1) = 0.1;
  m.Gamma(0, 1, 0) = 0.3; m.Gamma(0, 1, 1) = 0.7;
  m.Gamma(1, 0, 0) = 0.2; m.Gamma(1, 0, 1) = 0.8;
  m.Gamma(1, 1, 0) = 0.6; m.Gamma(1, 1, 1) = 0.4;
  m.reward_values = Vector::LinSpaced(2, 0.0, 1.0);
  return m;
}

inline MemorylessPolicy small_policy() {
  MemorylessPolicy p;
  p.Pi.resize(3, 2);
  p.Pi << 0.7, 0.3,
          0.4, 0.6,
          0.2, 0.8;
  return p;
}

inline Instance standard_fixture() {
  return generate_instance(standard_fixture_spec(), kStandardFixtureSeed);
}

/// Random well-conditioned instance for property tests.
inline Instance random_instance(std::uint64_t seed, int X = 3, int Y = 5, int A = 2, int R = 2) {
  GeneratorSpec s;
  s.X = X;
  s.Y = Y;
  s.A = A;
  s.R = R;
  s.d_O_floor = 0.3;
  s.sigma_O_floor = 0.05;
  s.policy.kind = PolicySpec::Kind::random;
  s.policy.pi_min = 0.5 / A;
  return generate_instance(s, seed);
}

inline Vector random_simplex(Rng& rng, int n) {
  Vector v(n);
  for (int i = 0; i < n; ++i) v(i) = rng.exponential();
  return v / v.sum();
}

struct OrthogonalTensor {
  Tensor3 tensor;
  std::vector<double> lambdas;
  Matrix vectors;  // orthonormal columns
};

/// sum_i lambda_i u_i^{(x)3} with a random orthonormal basis and weights in [1, 10].
inline OrthogonalTensor random_orthogonal_tensor(Rng& rng, int k) {
  Matrix g(k, k);
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < k; ++j) g(i, j) = rng.normal();
  Eigen::HouseholderQR<Matrix> qr(g);
  OrthogonalTensor out;
  out.vectors = qr.householderQ() * Matrix::Identity(k, k);
  out.tensor = Tensor3(k, k, k);
  for (int i = 0; i < k; ++i) {
    out.lambdas.push_back(1.0 + 9.0 * rng.uniform());
    const Vector u = out.vectors.col(i);
    out.tensor += outer3(u, u, u, out.lambdas.back());
  }
  return out;
}

}  // namespace fixtures

namespace oracle {

using namespace spomdp;

/// sum_a sum_y pi(a|y) O(y|x) T(x'|x,a), one scalar at a time.
inline Matrix induced_chain(const PomdpModel& m, const MemorylessPolicy& p) {
  Matrix P = Matrix::Zero(m.X, m.X);
  for (int x = 0; x < m.X; ++x)
    for (int xp = 0; xp < m.X; ++xp) {
      double s = 0.0;
      for (int a = 0; a < m.A; ++a)
        for (int y = 0; y < m.Y; ++y) s += p.Pi(y, a) * m.O(y, x) * m.T(x, xp, a);
      P(x, xp) = s;
    }
  return P;
}

/// Stationary distribution by repeated multiplication.
inline Vector stationary_by_iteration(const Matrix& P, int steps = 20000) {
  Vector w = Vector::Constant(P.rows(), 1.0 / P.rows());
  for (int s = 0; s < steps; ++s) w = (w.transpose() * P).transpose();
  return w / w.sum();
}

/// P(x = i | a = l) from the joint P(x, y, a) by explicit summation.
inline Vector bayes_conditional(const PomdpModel& m, const MemorylessPolicy& p, int l) {
  const Vector w = stationary_by_iteration(oracle::induced_chain(m, p));
  Vector joint = Vector::Zero(m.X);
  for (int x = 0; x < m.X; ++x)
    for (int y = 0; y < m.Y; ++y) joint(x) += w(x) * m.O(y, x) * p.Pi(y, l);
  return joint / joint.sum();
}

struct Covariances {
  Matrix K12, K13, K23, K21, K31, K32;
};

/// Exact cross-view second moments by enumerating every outcome of the
/// window (x0, y0, a0, r0, x1, y1, r1, x2, y2) with a1 = l under the
/// stationary chain.
inline Covariances enumerate_covariances(const PomdpModel& m, const MemorylessPolicy& p, int l) {
  const ViewEncoding enc{m.Y, m.A, m.R};
  const Vector w = stationary_by_iteration(oracle::induced_chain(m, p));
  Covariances c;
  c.K12 = Matrix::Zero(enc.d1(), enc.d2());
  c.K13 = Matrix::Zero(enc.d1(), enc.d3());
  c.K23 = Matrix::Zero(enc.d2(), enc.d3());
  double total = 0.0;
  for (int x0 = 0; x0 < m.X; ++x0)
    for (int y0 = 0; y0 < m.Y; ++y0)
      for (int a0 = 0; a0 < m.A; ++a0)
        for (int r0 = 0; r0 < m.R; ++r0)
          for (int x1 = 0; x1 < m.X; ++x1)
            for (int y1 = 0; y1 < m.Y; ++y1)
              for (int r1 = 0; r1 < m.R; ++r1)
                for (int x2 = 0; x2 < m.X; ++x2)
                  for (int y2 = 0; y2 < m.Y; ++y2) {
                    const double pr = w(x0) * m.O(y0, x0) * p.Pi(y0, a0) * m.Gamma(x0, a0, r0) *
                                      m.T(x0, x1, a0) * m.O(y1, x1) * p.Pi(y1, l) *
                                      m.Gamma(x1, l, r1) * m.T(x1, x2, l) * m.O(y2, x2);
                    const int s1 = (a0 * m.Y + y0) * m.R + r0;
                    const int s2 = y1 * m.R + r1;
                    c.K12(s1, s2) += pr;
                    c.K13(s1, y2) += pr;
                    c.K23(s2, y2) += pr;
                    total += pr;
                  }
  c.K12 /= total;
  c.K13 /= total;
  c.K23 /= total;
  c.K21 = c.K12.transpose();
  c.K31 = c.K13.transpose();
  c.K32 = c.K23.transpose();
  return c;
}

/// Minimum over column pairs of the l1 distance, by scanning.
inline double separability_scan(const Matrix& O) {
  double best = INFINITY;
  for (int a = 0; a < O.cols(); ++a)
    for (int b = 0; b < O.cols(); ++b) {
      if (a == b) continue;
      double d = 0.0;
      for (int n = 0; n < O.rows(); ++n) d += std::abs(O(n, a) - O(n, b));
      best = std::min(best, d);
    }
  return best;
}

/// Brute-force best permutation by enumerating all X! orderings.
inline std::vector<int> best_permutation(const Matrix& est, const Matrix& ref) {
  std::vector<int> perm(est.cols());
  for (int i = 0; i < static_cast<int>(perm.size()); ++i) perm[i] = i;
  std::vector<int> best = perm;
  double best_cost = INFINITY;
  do {
    double cost = 0.0;
    for (int i = 0; i < static_cast<int>(perm.size()); ++i)
      cost += (est.col(i) - ref.col(perm[i])).lpNorm<1>();
    if (cost < best_cost) {
      best_cost = cost;
      best = perm;
    }
  } while (std::next_permutation(perm.begin(), perm.end()));
  return best;
}

}  // namespace oracle
