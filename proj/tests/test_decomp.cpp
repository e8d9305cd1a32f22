#include "support.hpp"

#include "spomdp/linalg.hpp"
#include "spomdp/moments.hpp"
#include "spomdp/tensor_decomp.hpp"

#include <doctest.h>

using namespace spomdp;

namespace {

// Column i of `got` matched to the closest column of `want` up to sign.
double max_matched_error(const Matrix& got, const Matrix& want, bool allow_sign) {
  double worst = 0.0;
  for (int i = 0; i < got.cols(); ++i) {
    double best = INFINITY;
    for (int j = 0; j < want.cols(); ++j) {
      best = std::min(best, (got.col(i) - want.col(j)).norm());
      if (allow_sign) best = std::min(best, (got.col(i) + want.col(j)).norm());
    }
    worst = std::max(worst, best);
  }
  return worst;
}

}  // namespace

TEST_CASE("whiten") {
  SUBCASE("identity") {
    const WhiteningTransform w = whiten(Matrix::Identity(3, 3), 3);
    CHECK((w.W.transpose() * w.W - Matrix::Identity(3, 3)).norm() <= 1e-14);
  }
  SUBCASE("diagonal") {
    Matrix m2 = Matrix::Zero(2, 2);
    m2(0, 0) = 4.0;
    m2(1, 1) = 1.0;
    const WhiteningTransform w = whiten(m2, 2);
    CHECK((w.W.transpose() * m2 * w.W - Matrix::Identity(2, 2)).norm() <= 1e-15);
    CHECK(std::abs(std::abs(w.W(0, 0)) - 0.5) <= 1e-15);
    CHECK(std::abs(std::abs(w.W(1, 1)) - 1.0) <= 1e-15);
  }
  SUBCASE("random rank two") {
    Rng rng(1);
    for (int trial = 0; trial < 10; ++trial) {
      Matrix a(5, 2);
      for (int i = 0; i < 10; ++i) a.data()[i] = rng.normal();
      const Matrix m2 = a * a.transpose();
      const WhiteningTransform w = whiten(m2, 2);
      CHECK((w.W.transpose() * m2 * w.W - Matrix::Identity(2, 2)).norm() <= 1e-10);
      CHECK((w.B - m2 * w.W).norm() <= 1e-12);
    }
  }
  SUBCASE("rank deficiency") {
    Vector v(3);
    v << 1.0, 2.0, 3.0;
    CHECK_THROWS_AS(whiten(v * v.transpose(), 2), RankDeficiencyError);
  }
}

TEST_CASE("whitened tensor") {
  Rng rng(2);
  Tensor3 m3(3, 3, 3);
  for (double& x : m3.data()) x = rng.uniform();
  CHECK(whitened_tensor(m3, Matrix::Identity(3, 3)).max_abs_diff(m3) <= 1e-15);

  const Vector e1 = Vector::Unit(3, 0);
  Matrix w = Matrix::Zero(3, 2);
  w(0, 0) = 2.0;
  w(1, 1) = 1.0;
  const Tensor3 t = whitened_tensor(outer3(e1, e1, e1), w);
  const Vector f1 = Vector::Unit(2, 0);
  CHECK(t.max_abs_diff(outer3(f1, f1, f1, 8.0)) == 0.0);
}

TEST_CASE("tensor power iteration") {
  SUBCASE("single eigenpair") {
    const Vector e1 = Vector::Unit(3, 0);
    const EigenComponents c = tensor_power_iteration(outer3(e1, e1, e1), 1);
    CHECK(std::abs(c.lambdas[0] - 1.0) <= 1e-12);
    CHECK(std::abs(std::abs(c.vectors(0, 0)) - 1.0) <= 1e-12);
  }
  SUBCASE("two orthogonal components") {
    Vector a(3), b(3);
    a << 1.0, 1.0, 0.0;
    b << 1.0, -1.0, 1.0;
    a.normalize();
    b -= b.dot(a) * a;
    b.normalize();
    const Tensor3 t = [&] {
      Tensor3 s = outer3(a, a, a, 2.0);
      s += outer3(b, b, b, 1.0);
      return s;
    }();
    const EigenComponents c = tensor_power_iteration(t, 2);
    CHECK(std::abs(c.lambdas[0] - 2.0) <= 1e-8);
    CHECK(std::abs(c.lambdas[1] - 1.0) <= 1e-8);
    CHECK(std::min((c.vectors.col(0) - a).norm(), (c.vectors.col(0) + a).norm()) <= 1e-8);
    CHECK(std::min((c.vectors.col(1) - b).norm(), (c.vectors.col(1) + b).norm()) <= 1e-8);
    CHECK(c.deflation_residual <= 1e-8);
  }
  SUBCASE("negative weight gives a positive eigenvalue on the reflected vector") {
    const Vector e = Vector::Unit(2, 1);
    const EigenComponents c = tensor_power_iteration(outer3(e, e, e, -3.0), 1);
    CHECK(c.lambdas[0] == doctest::Approx(3.0));
    CHECK(c.vectors(1, 0) == doctest::Approx(-1.0));
    CHECK(c.lambdas[0] > 0.0);
  }
  SUBCASE("parallel and serial restarts agree") {
    Rng rng(9);
    const auto o = fixtures::random_orthogonal_tensor(rng, 4);
    PowerIterationOptions serial;
    serial.parallel = false;
    serial.seed = 5;
    PowerIterationOptions par = serial;
    par.parallel = true;
    const EigenComponents a = tensor_power_iteration(o.tensor, 4, serial);
    const EigenComponents b = tensor_power_iteration(o.tensor, 4, par);
    CHECK(a.lambdas == b.lambdas);
    CHECK(a.vectors == b.vectors);
  }
  SUBCASE("invalid options") {
    PowerIterationOptions bad;
    bad.restarts = 0;
    CHECK_THROWS_AS(tensor_power_iteration(Tensor3(2, 2, 2, 1.0), 1, bad), ValidationError);
    CHECK_THROWS_AS(tensor_power_iteration(Tensor3(2, 2, 2, 1.0), 3), DimensionError);
  }
  SUBCASE("non-convergence raises with the residual") {
    Rng rng(4);
    const auto o = fixtures::random_orthogonal_tensor(rng, 4);
    PowerIterationOptions opts;
    opts.restarts = 3;
    opts.sweeps = 1;
    opts.tol = 1e-15;
    try {
      tensor_power_iteration(o.tensor, 1, opts);
      FAIL("expected a convergence error");
    } catch (const ConvergenceError& e) {
      CHECK(e.residual() > 0.0);
    }
  }
}

TEST_CASE("unwhiten and decompose") {
  SUBCASE("single component") {
    Matrix mu(3, 1);
    mu << 0.2, 0.3, 0.5;
    const MomentPair mp = moments_from_components(mu, Vector::Ones(1));
    const Decomposition d = decompose(mp.M2, mp.M3, 1);
    CHECK(std::abs(d.recovered.weights(0) - 1.0) <= 1e-10);
    CHECK((d.recovered.columns_raw - mu).cwiseAbs().maxCoeff() <= 1e-10);
  }
  SUBCASE("fixture moments") {
    const Instance f = fixtures::standard_fixture();
    for (int l = 0; l < f.model.A; ++l) {
      const ViewMatrices v = true_view_matrices(f.model, f.policy, l);
      const Vector w = action_conditional_distribution(f.model, f.policy, l);
      const MomentPair mp = exact_moments(f.model, f.policy, l);
      const Decomposition d = decompose(mp.M2, mp.M3, f.model.X);
      CHECK(std::abs(d.recovered.weights.sum() - 1.0) <= 1e-6);
      const std::vector<int> perm = oracle::best_permutation(d.recovered.columns, v.V3);
      for (int i = 0; i < f.model.X; ++i) {
        CHECK((d.recovered.columns.col(i) - v.V3.col(perm[i])).lpNorm<1>() <= 1e-6);
        CHECK(std::abs(d.recovered.weights(i) - w(perm[i])) <= 1e-6);
      }
      // reconstruction
      const MomentPair back = moments_from_components(d.recovered.columns_raw, d.recovered.weights);
      CHECK((back.M2 - mp.M2).norm() <= 1e-6);
      CHECK(back.M3.max_abs_diff(mp.M3) <= 1e-6);
      CHECK(d.components.deflation_residual <= 1e-6);
      // whitened tensor reconstruction
      Tensor3 rebuilt(f.model.X, f.model.X, f.model.X);
      for (int i = 0; i < f.model.X; ++i) {
        const Vector u = d.components.vectors.col(i);
        rebuilt += outer3(u, u, u, d.components.lambdas[i]);
      }
      CHECK(rebuilt.max_abs_diff(whitened_tensor(mp.M3, d.transform.W)) <= 1e-8);
      CHECK((d.transform.W.transpose() * mp.M2 * d.transform.W - Matrix::Identity(2, 2)).norm() <= 1e-8);
    }
  }
  SUBCASE("seed stability") {
    const Instance f = fixtures::standard_fixture();
    const MomentPair mp = exact_moments(f.model, f.policy, 0);
    PowerIterationOptions a, b;
    a.seed = 1;
    b.seed = 987654321;
    const Decomposition da = decompose(mp.M2, mp.M3, 2, a);
    const Decomposition db = decompose(mp.M2, mp.M3, 2, b);
    CHECK(max_matched_error(da.components.vectors, db.components.vectors, true) <= 1e-6);
    CHECK(max_matched_error(da.recovered.columns, db.recovered.columns, false) <= 1e-6);
  }
  SUBCASE("degenerate component") {
    EigenComponents c;
    c.lambdas = {0.0};
    c.vectors = Matrix::Ones(1, 1);
    WhiteningTransform w;
    w.B = Matrix::Ones(2, 1);
    CHECK_THROWS_AS(unwhiten(c, w), DegenerateError);
  }
  SUBCASE("recovery on random orthogonal tensors") {
    Rng rng(77);
    for (int trial = 0; trial < 20; ++trial) {
      const int k = 2 + trial % 4;
      const auto o = fixtures::random_orthogonal_tensor(rng, k);
      const EigenComponents c = tensor_power_iteration(o.tensor, k);
      CHECK(max_matched_error(c.vectors, o.vectors, true) <= 1e-6);
      for (int i = 0; i < k; ++i)
        for (int j = i + 1; j < k; ++j) CHECK(std::abs(c.vectors.col(i).dot(c.vectors.col(j))) <= 1e-6);
    }
  }
}
