#pragma once

#include "spomdp/types.hpp"

#include <string>
#include <vector>

namespace spomdp {

/// Singular values in descending order.
Vector singular_values(const Matrix& a);

/// Number of singular values strictly above tol.
int numerical_rank(const Matrix& a, double tol);

/// k-th largest singular value (1-based); 0 when k exceeds min(rows, cols).
double kth_singular_value(const Matrix& a, int k);

/// Smallest singular value over min(rows, cols).
double min_singular_value(const Matrix& a);

struct PseudoInverse {
  Matrix pinv;
  int rank = 0;
  Vector singular_values;
};

/// SVD pseudo-inverse with two truncations: singular values at or below
/// max(rows, cols) * eps * sigma_max are dropped, then at most `rank`
/// components are kept. Throws RankDeficiencyError (tagged with `name`)
/// when fewer than `rank` singular values survive the first cut.
/// `rank < 0` disables the second truncation and the rank check.
PseudoInverse truncated_pinv(const Matrix& a, int rank, const std::string& name,
                             double eps = 1e-12);

/// Euclidean projection onto the probability simplex (sort-based).
Vector project_to_simplex(const Vector& v);

/// Clip negatives (and NaNs) to zero and rescale to unit sum. When nothing
/// positive survives the result is uniform and `degenerate` is set.
Vector clip_and_normalize(const Vector& v, bool* degenerate = nullptr);

double l1_distance(const Vector& a, const Vector& b);

/// Minimum-cost perfect matching on a square cost matrix (Hungarian
/// algorithm). Returns assignment[row] = column.
std::vector<int> solve_assignment(const Matrix& cost);

/// Symmetric square matrix from a near-symmetric one.
inline Matrix symmetric_part(const Matrix& a) { return 0.5 * (a + a.transpose()); }

}  // namespace spomdp
