#pragma once

#include "spomdp/model.hpp"

#include <array>
#include <utility>
#include <vector>

namespace spomdp {

/// One-hot encodings of the three views around a middle step t with a_t = l:
///   view 1 <- (a_{t-1}, y_{t-1}, r_{t-1}), index (k * Y + n) * R + m, d1 = A*Y*R
///   view 2 <- (y_t, r_t),                  index n * R + m,           d2 = Y*R
///   view 3 <- y_{t+1},                     index n,                   d3 = Y
struct ViewEncoding {
  static constexpr int kVersion = 1;

  int Y = 0;
  int A = 0;
  int R = 0;

  int d1() const { return A * Y * R; }
  int d2() const { return Y * R; }
  int d3() const { return Y; }
  int dim(int view) const;

  int first_index(int k, int n, int m) const;
  /// Inverse of first_index: (k, n, m).
  std::array<int, 3> decode_first(int s) const;
  int second_index(int n, int m) const;
  /// Inverse of second_index: (n, m).
  std::pair<int, int> decode_second(int s) const;
};

int first_view_index(int k, int n, int m, const ViewEncoding& enc);
int second_view_index(int n, int m, const ViewEncoding& enc);

struct ViewTriple {
  int s1 = 0;
  int s2 = 0;
  int s3 = 0;
  bool operator==(const ViewTriple&) const = default;
};

struct ActionViewSamples {
  int action = 0;
  std::vector<ViewTriple> triples;
  std::size_t count() const noexcept { return triples.size(); }
};

/// Columns are the conditional view distributions given the middle state.
struct ViewMatrices {
  int action = 0;
  Matrix V1;  // d1 x X
  Matrix V2;  // d2 x X
  Matrix V3;  // d3 x X

  const Matrix& view(int nu) const;
};

/// Triples for every zero-based t in [1, N-2] with a_t = l.
ActionViewSamples collect_views(const Trajectory& traj, int l, const ViewEncoding& enc);

/// Exact view matrices from a known model, without the rank check.
ViewMatrices view_matrices_unchecked(const PomdpModel& model, const MemorylessPolicy& policy,
                                     int l);

/// Exact view matrices; throws RankDeficiencyError naming V1/V2/V3 when a
/// matrix has numerical rank below X at tolerance 1e-10.
ViewMatrices true_view_matrices(const PomdpModel& model, const MemorylessPolicy& policy, int l);

ViewEncoding encoding_for(const PomdpModel& model);

}  // namespace spomdp
