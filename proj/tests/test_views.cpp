#include "support.hpp"

#include "spomdp/linalg.hpp"
#include "spomdp/moments.hpp"
#include "spomdp/views.hpp"

#include <doctest.h>

using namespace spomdp;

TEST_CASE("first view index") {
  const ViewEncoding enc{3, 2, 2};
  CHECK(first_view_index(0, 0, 0, enc) == 0);
  CHECK(first_view_index(1, 2, 1, enc) == 11);
  CHECK(first_view_index(1, 2, 1, enc) == enc.d1() - 1);
  const ViewEncoding big{5, 4, 3};
  CHECK(first_view_index(3, 4, 2, big) == big.d1() - 1);
  CHECK_THROWS_AS(first_view_index(2, 0, 0, enc), DimensionError);
}

TEST_CASE("second view index") {
  const ViewEncoding enc{3, 2, 2};
  CHECK(second_view_index(0, 0, enc) == 0);
  CHECK(second_view_index(2, 1, enc) == 5);
  CHECK(second_view_index(enc.Y - 1, enc.R - 1, enc) == enc.d2() - 1);
  CHECK_THROWS_AS(second_view_index(0, 2, enc), DimensionError);
}

TEST_CASE("encodings are bijections") {
  const ViewEncoding enc{4, 3, 5};
  CHECK(enc.d1() == 60);
  CHECK(enc.d2() == 20);
  CHECK(enc.d3() == 4);
  std::vector<int> hit(enc.d1(), 0);
  for (int k = 0; k < enc.A; ++k)
    for (int n = 0; n < enc.Y; ++n)
      for (int m = 0; m < enc.R; ++m) {
        const int s = enc.first_index(k, n, m);
        ++hit[s];
        CHECK(enc.decode_first(s) == std::array<int, 3>{k, n, m});
      }
  for (int h : hit) CHECK(h == 1);
  for (int s = 0; s < enc.d2(); ++s) {
    const auto [n, m] = enc.decode_second(s);
    CHECK(enc.second_index(n, m) == s);
  }
}

TEST_CASE("collect_views") {
  const ViewEncoding enc{3, 2, 2};
  SUBCASE("absent action") {
    Trajectory t;
    t.steps = {{0, 0, 0}, {1, 0, 1}, {2, 0, 0}, {0, 0, 1}};
    CHECK(collect_views(t, 1, enc).count() == 0);
  }
  SUBCASE("three steps give one window") {
    Trajectory t;
    t.steps = {{2, 1, 0}, {1, 0, 1}, {0, 1, 1}};
    const ActionViewSamples s = collect_views(t, 0, enc);
    REQUIRE(s.count() == 1);
    CHECK(s.triples[0] == ViewTriple{enc.first_index(1, 2, 0), enc.second_index(1, 1), 0});
    // the boundary steps are never middles
    CHECK(collect_views(t, 1, enc).count() == 0);
  }
  SUBCASE("interior counts add up") {
    const PomdpModel m = fixtures::small_model();
    SimulationOptions o;
    o.steps = 10000;
    o.seed = 4;
    const Trajectory t = simulate(m, fixtures::small_policy(), o);
    std::size_t total = 0;
    for (int l = 0; l < m.A; ++l) total += collect_views(t, l, encoding_for(m)).count();
    CHECK(total == o.steps - 2);
  }
}

TEST_CASE("true view matrices") {
  SUBCASE("single state gives marginals") {
    PomdpModel m;
    m.X = 1;
    m.Y = 3;
    m.A = 2;
    m.R = 2;
    m.O.resize(3, 1);
    m.O << 0.2, 0.3, 0.5;
    m.T = Tensor3(1, 1, 2, 1.0);
    m.Gamma = Tensor3(1, 2, 2);
    m.Gamma(0, 0, 0) = 0.4;
    m.Gamma(0, 0, 1) = 0.6;
    m.Gamma(0, 1, 0) = 0.9;
    m.Gamma(0, 1, 1) = 0.1;
    m.reward_values = Vector::LinSpaced(2, 0.0, 1.0);
    const MemorylessPolicy p = fixtures::small_policy();
    const ViewMatrices v = true_view_matrices(m, p, 1);
    CHECK(v.V1.cols() == 1);
    CHECK(v.V2.cols() == 1);
    CHECK(v.V3.cols() == 1);
    CHECK((v.V3 - m.O).cwiseAbs().maxCoeff() <= 1e-15);
    for (const Matrix* M : {&v.V1, &v.V2, &v.V3}) CHECK(std::abs(M->sum() - 1.0) <= 1e-12);
  }
  SUBCASE("identity emissions and deterministic transitions") {
    PomdpModel m;
    m.X = 3;
    m.Y = 3;
    m.A = 2;
    m.R = 1;
    m.O = Matrix::Identity(3, 3);
    m.T = Tensor3(3, 3, 2);
    m.T(0, 1, 0) = m.T(1, 2, 0) = m.T(2, 0, 0) = 1.0;
    m.T(0, 0, 1) = m.T(1, 1, 1) = m.T(2, 2, 1) = 1.0;
    m.Gamma = Tensor3(3, 2, 1, 1.0);
    m.reward_values = Vector::Zero(1);
    const ViewMatrices v = true_view_matrices(m, MemorylessPolicy::uniform(3, 2), 0);
    for (int i = 0; i < 3; ++i)
      CHECK((v.V3.col(i) - Matrix::Identity(3, 3).col((i + 1) % 3)).cwiseAbs().maxCoeff() <= 1e-15);
  }
  SUBCASE("columns are distributions on random instances") {
    for (std::uint64_t s = 0; s < 10; ++s) {
      const Instance inst = fixtures::random_instance(300 + s);
      for (int l = 0; l < inst.model.A; ++l) {
        const ViewMatrices v = true_view_matrices(inst.model, inst.policy, l);
        for (const Matrix* M : {&v.V1, &v.V2, &v.V3}) {
          CHECK(M->minCoeff() >= 0.0);
          CHECK((M->colwise().sum().array() - 1.0).abs().maxCoeff() <= 1e-10);
        }
      }
    }
  }
  SUBCASE("rank deficiency names the matrix") {
    PomdpModel m = fixtures::small_model();
    // identical transition rows make every V3 column equal
    for (int l = 0; l < 2; ++l) {
      m.T(1, 0, l) = m.T(0, 0, l);
      m.T(1, 1, l) = m.T(0, 1, l);
    }
    try {
      true_view_matrices(m, fixtures::small_policy(), 0);
      FAIL("expected a rank error");
    } catch (const RankDeficiencyError& e) {
      CHECK(e.which().find("V") == 0);
      CHECK(e.required() == 2);
    }
  }
  SUBCASE("Monte-Carlo frequencies match the weighted columns") {
    const PomdpModel m = fixtures::small_model();
    const MemorylessPolicy p = fixtures::small_policy();
    SimulationOptions o;
    o.steps = 1000000;
    o.seed = 21;
    o.log_hidden = true;
    o.initial = stationary_distribution(induced_chain(m, p));
    const Trajectory t = simulate(m, p, o);
    const ViewEncoding enc = encoding_for(m);
    for (int l = 0; l < m.A; ++l) {
      const ViewMatrices v = true_view_matrices(m, p, l);
      const Vector w = action_conditional_distribution(m, p, l);
      Matrix f2 = Matrix::Zero(enc.d2(), m.X), f3 = Matrix::Zero(enc.d3(), m.X);
      double count = 0.0;
      for (std::size_t s = 1; s + 1 < t.size(); ++s) {
        if (t.steps[s].a != l) continue;
        const int x = (*t.hidden_states)[s];
        f2(enc.second_index(t.steps[s].y, t.steps[s].r), x) += 1.0;
        f3(t.steps[s + 1].y, x) += 1.0;
        count += 1.0;
      }
      f2 /= count;
      f3 /= count;
      for (int i = 0; i < m.X; ++i) {
        CHECK((f2.col(i) - w(i) * v.V2.col(i)).lpNorm<1>() <= 0.01);
        CHECK((f3.col(i) - w(i) * v.V3.col(i)).lpNorm<1>() <= 0.01);
      }
    }
  }
}

TEST_CASE("view matrices agree with exact covariances") {
  for (std::uint64_t s = 0; s < 10; ++s) {
    const Instance inst = fixtures::random_instance(400 + s);
    for (int l = 0; l < inst.model.A; ++l) {
      const ViewMatrices v = true_view_matrices(inst.model, inst.policy, l);
      const Vector w = action_conditional_distribution(inst.model, inst.policy, l);
      const CovarianceSet c = exact_covariances(inst.model, inst.policy, l);
      CHECK((v.V1 * w.asDiagonal() * v.V2.transpose() - c.K12).cwiseAbs().maxCoeff() <= 1e-10);
      CHECK((v.V3 * w.asDiagonal() * v.V1.transpose() - c.K31).cwiseAbs().maxCoeff() <= 1e-10);
      CHECK((v.V3 * w.asDiagonal() * v.V2.transpose() - c.K32).cwiseAbs().maxCoeff() <= 1e-10);
    }
  }
}
