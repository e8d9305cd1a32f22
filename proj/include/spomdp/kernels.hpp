#pragma once

// Data-parallel inner loops of the estimator. Every kernel has a plain serial
// reference (namespace serial) that the tests and benchmarks compare against
// the OpenMP version. Parallel reductions combine per-thread partials in
// thread order, so results are deterministic for a fixed thread count and
// differ from the serial reference only by summation order.

#include "spomdp/types.hpp"
#include "spomdp/views.hpp"

#include <span>

namespace spomdp::kernels {

/// counts(s, s') = sum over samples of weight * [view nu == s][view nu' == s'].
/// Empty `weights` means unit weights.
Matrix cooccurrence(std::span<const ViewTriple> samples, std::span<const double> weights, int nu,
                    int nu_prime, int rows, int cols);

/// sum over samples of weight * C1(:, s1) (x) C2(:, s2) (x) e_{s3}.
Tensor3 third_moment(const Matrix& first_op, const Matrix& second_op,
                     std::span<const ViewTriple> samples, std::span<const double> weights, int d3);

/// M3(W, W, W).
Tensor3 multilinear(const Tensor3& m3, const Matrix& w);

namespace serial {

Matrix cooccurrence(std::span<const ViewTriple> samples, std::span<const double> weights, int nu,
                    int nu_prime, int rows, int cols);

Tensor3 third_moment(const Matrix& first_op, const Matrix& second_op,
                     std::span<const ViewTriple> samples, std::span<const double> weights, int d3);

Tensor3 multilinear(const Tensor3& m3, const Matrix& w);

}  // namespace serial

/// Number of OpenMP threads the kernels will use.
int max_threads();

}  // namespace spomdp::kernels
