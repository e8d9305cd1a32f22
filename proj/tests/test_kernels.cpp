#include "support.hpp"

#include "spomdp/kernels.hpp"

#include <doctest.h>
#include <omp.h>

using namespace spomdp;

namespace {

struct Samples {
  std::vector<ViewTriple> triples;
  std::vector<double> weights;
};

Samples random_samples(Rng& rng, std::size_t n, int d1, int d2, int d3) {
  Samples s;
  for (std::size_t i = 0; i < n; ++i) {
    s.triples.push_back({static_cast<int>(rng.next() % d1), static_cast<int>(rng.next() % d2),
                         static_cast<int>(rng.next() % d3)});
    s.weights.push_back(rng.uniform());
  }
  return s;
}

double rel_diff(const Matrix& a, const Matrix& b) {
  return (a - b).cwiseAbs().maxCoeff() / std::max(1.0, b.cwiseAbs().maxCoeff());
}

double rel_diff(const Tensor3& a, const Tensor3& b) {
  double scale = 1.0;
  for (double v : b.data()) scale = std::max(scale, std::abs(v));
  return a.max_abs_diff(b) / scale;
}

Matrix random_matrix(Rng& rng, int r, int c) {
  Matrix m(r, c);
  for (int i = 0; i < r; ++i)
    for (int j = 0; j < c; ++j) m(i, j) = rng.normal();
  return m;
}

struct Threads {
  int saved = omp_get_max_threads();
  explicit Threads(int n) { omp_set_num_threads(n); }
  ~Threads() { omp_set_num_threads(saved); }
};

}  // namespace

TEST_CASE("kernels match their serial references") {
  Threads four(4);
  Rng rng(21);
  const int d1 = 24, d2 = 8, d3 = 6;
  const Samples s = random_samples(rng, 50000, d1, d2, d3);

  SUBCASE("cooccurrence") {
    for (auto [nu, nup, rows, cols] : {std::tuple{1, 2, d1, d2}, std::tuple{3, 1, d3, d1},
                                       std::tuple{2, 3, d2, d3}}) {
      CHECK(rel_diff(kernels::cooccurrence(s.triples, s.weights, nu, nup, rows, cols),
                     kernels::serial::cooccurrence(s.triples, s.weights, nu, nup, rows, cols)) <= 1e-12);
      // unit weights count exactly
      CHECK(kernels::cooccurrence(s.triples, {}, nu, nup, rows, cols) ==
            kernels::serial::cooccurrence(s.triples, {}, nu, nup, rows, cols));
    }
  }
  SUBCASE("third moment") {
    const Matrix c1 = random_matrix(rng, d3, d1);
    const Matrix c2 = random_matrix(rng, d3, d2);
    CHECK(rel_diff(kernels::third_moment(c1, c2, s.triples, s.weights, d3),
                   kernels::serial::third_moment(c1, c2, s.triples, s.weights, d3)) <= 1e-12);
  }
  SUBCASE("multilinear") {
    Tensor3 t(9, 9, 9);
    for (double& v : t.data()) v = rng.normal();
    const Matrix w = random_matrix(rng, 9, 4);
    CHECK(rel_diff(kernels::multilinear(t, w), kernels::serial::multilinear(t, w)) <= 1e-12);
  }
  SUBCASE("empty input") {
    const Matrix z = kernels::cooccurrence({}, {}, 1, 2, d1, d2);
    CHECK(z.isZero());
  }
  SUBCASE("repeatable for a fixed thread count") {
    const Matrix a = kernels::cooccurrence(s.triples, s.weights, 1, 3, d1, d3);
    const Matrix b = kernels::cooccurrence(s.triples, s.weights, 1, 3, d1, d3);
    CHECK(a == b);
  }
  CHECK(kernels::max_threads() == 4);
}
