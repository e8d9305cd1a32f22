#include "spomdp/kernels.hpp"

#include <omp.h>

#include <vector>

namespace spomdp::kernels {

namespace {

inline int code(const ViewTriple& t, int nu) {
  switch (nu) {
    case 1: return t.s1;
    case 2: return t.s2;
    case 3: return t.s3;
    default: throw DimensionError("view index must be 1, 2 or 3");
  }
}

void check_weights(std::span<const ViewTriple> samples, std::span<const double> weights) {
  if (!weights.empty() && weights.size() != samples.size())
    throw DimensionError("weights must be empty or match the sample count");
}

void check_range(int nu, int nu_prime) {
  if (nu < 1 || nu > 3 || nu_prime < 1 || nu_prime > 3)
    throw DimensionError("view index must be 1, 2 or 3");
}

// Accumulates C1(:, s1) C2(:, s2)^T scaled into slab s3 of a d3 x d3 x d3 tensor.
inline void add_sample(Tensor3& acc, const Matrix& c1, const Matrix& c2, const ViewTriple& t,
                       double w) {
  const int d3 = acc.dim(0);
  for (int a = 0; a < d3; ++a) {
    const double x = w * c1(a, t.s1);
    if (x == 0.0) continue;
    for (int b = 0; b < d3; ++b) acc(a, b, t.s3) += x * c2(b, t.s2);
  }
}

void check_ops(const Matrix& c1, const Matrix& c2, int d3) {
  if (c1.rows() != d3 || c2.rows() != d3)
    throw DimensionError("third_moment: operator row count must equal d3");
}

}  // namespace

int max_threads() { return omp_get_max_threads(); }

namespace serial {

Matrix cooccurrence(std::span<const ViewTriple> samples, std::span<const double> weights, int nu,
                    int nu_prime, int rows, int cols) {
  check_range(nu, nu_prime);
  check_weights(samples, weights);
  Matrix counts = Matrix::Zero(rows, cols);
  for (std::size_t p = 0; p < samples.size(); ++p)
    counts(code(samples[p], nu), code(samples[p], nu_prime)) += weights.empty() ? 1.0 : weights[p];
  return counts;
}

Tensor3 third_moment(const Matrix& first_op, const Matrix& second_op,
                     std::span<const ViewTriple> samples, std::span<const double> weights,
                     int d3) {
  check_ops(first_op, second_op, d3);
  check_weights(samples, weights);
  Tensor3 acc(d3, d3, d3);
  for (std::size_t p = 0; p < samples.size(); ++p)
    add_sample(acc, first_op, second_op, samples[p], weights.empty() ? 1.0 : weights[p]);
  return acc;
}

Tensor3 multilinear(const Tensor3& m3, const Matrix& w) {
  const int d = m3.dim(0);
  const int k = static_cast<int>(w.cols());
  if (m3.dim(1) != d || m3.dim(2) != d || w.rows() != d)
    throw DimensionError("multilinear: dimension mismatch");
  Tensor3 out(k, k, k);
  for (int a = 0; a < k; ++a)
    for (int b = 0; b < k; ++b)
      for (int c = 0; c < k; ++c) {
        double s = 0.0;
        for (int i = 0; i < d; ++i)
          for (int j = 0; j < d; ++j)
            for (int l = 0; l < d; ++l) s += m3(i, j, l) * w(i, a) * w(j, b) * w(l, c);
        out(a, b, c) = s;
      }
  return out;
}

}  // namespace serial

Matrix cooccurrence(std::span<const ViewTriple> samples, std::span<const double> weights, int nu,
                    int nu_prime, int rows, int cols) {
  check_range(nu, nu_prime);
  check_weights(samples, weights);
  const int threads = omp_get_max_threads();
  std::vector<Matrix> partial(threads, Matrix::Zero(rows, cols));
  const auto n = static_cast<std::ptrdiff_t>(samples.size());
#pragma omp parallel num_threads(threads)
  {
    Matrix& local = partial[omp_get_thread_num()];
#pragma omp for schedule(static)
    for (std::ptrdiff_t p = 0; p < n; ++p)
      local(code(samples[p], nu), code(samples[p], nu_prime)) += weights.empty() ? 1.0 : weights[p];
  }
  Matrix counts = Matrix::Zero(rows, cols);
  for (const Matrix& m : partial) counts += m;
  return counts;
}

Tensor3 third_moment(const Matrix& first_op, const Matrix& second_op,
                     std::span<const ViewTriple> samples, std::span<const double> weights,
                     int d3) {
  check_ops(first_op, second_op, d3);
  check_weights(samples, weights);
  const int threads = omp_get_max_threads();
  std::vector<Tensor3> partial(threads, Tensor3(d3, d3, d3));
  const auto n = static_cast<std::ptrdiff_t>(samples.size());
#pragma omp parallel num_threads(threads)
  {
    Tensor3& local = partial[omp_get_thread_num()];
#pragma omp for schedule(static)
    for (std::ptrdiff_t p = 0; p < n; ++p)
      add_sample(local, first_op, second_op, samples[p], weights.empty() ? 1.0 : weights[p]);
  }
  Tensor3 acc(d3, d3, d3);
  for (const Tensor3& t : partial) acc += t;
  return acc;
}

Tensor3 multilinear(const Tensor3& m3, const Matrix& w) {
  const int d = m3.dim(0);
  const int k = static_cast<int>(w.cols());
  if (m3.dim(1) != d || m3.dim(2) != d || w.rows() != d)
    throw DimensionError("multilinear: dimension mismatch");
  // Contract one mode at a time: d^3 k + d^2 k^2 + d k^3 instead of d^3 k^3.
  Tensor3 first(k, d, d);
#pragma omp parallel for schedule(static)
  for (int a = 0; a < k; ++a)
    for (int j = 0; j < d; ++j)
      for (int l = 0; l < d; ++l) {
        double s = 0.0;
        for (int i = 0; i < d; ++i) s += w(i, a) * m3(i, j, l);
        first(a, j, l) = s;
      }
  Tensor3 second(k, k, d);
#pragma omp parallel for collapse(2) schedule(static)
  for (int a = 0; a < k; ++a)
    for (int b = 0; b < k; ++b)
      for (int l = 0; l < d; ++l) {
        double s = 0.0;
        for (int j = 0; j < d; ++j) s += w(j, b) * first(a, j, l);
        second(a, b, l) = s;
      }
  Tensor3 out(k, k, k);
#pragma omp parallel for collapse(2) schedule(static)
  for (int a = 0; a < k; ++a)
    for (int b = 0; b < k; ++b)
      for (int c = 0; c < k; ++c) {
        double s = 0.0;
        for (int l = 0; l < d; ++l) s += w(l, c) * second(a, b, l);
        out(a, b, c) = s;
      }
  return out;
}

}  // namespace spomdp::kernels
