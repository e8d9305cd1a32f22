#include "spomdp/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>

namespace spomdp {

Tensor3& Tensor3::operator+=(const Tensor3& other) {
  if (!same_shape(other)) throw DimensionError("Tensor3 +=: shape mismatch");
  for (std::size_t p = 0; p < data_.size(); ++p) data_[p] += other.data_[p];
  return *this;
}

Tensor3& Tensor3::operator*=(double s) {
  for (double& x : data_) x *= s;
  return *this;
}

Tensor3 Tensor3::symmetrized() const {
  const int n = dims_[0];
  if (dims_[1] != n || dims_[2] != n) throw DimensionError("symmetrized: tensor is not cubical");
  Tensor3 out(n, n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) {
        const Tensor3& t = *this;
        out(i, j, k) = (t(i, j, k) + t(i, k, j) + t(j, i, k) + t(j, k, i) + t(k, i, j) +
                        t(k, j, i)) /
                       6.0;
      }
  return out;
}

double Tensor3::frobenius_norm() const {
  double s = 0.0;
  for (double x : data_) s += x * x;
  return std::sqrt(s);
}

double Tensor3::max_abs_diff(const Tensor3& other) const {
  if (!same_shape(other)) throw DimensionError("max_abs_diff: shape mismatch");
  double m = 0.0;
  for (std::size_t p = 0; p < data_.size(); ++p) m = std::max(m, std::abs(data_[p] - other.data_[p]));
  return m;
}

Vector Tensor3::contract_two(const Vector& u) const {
  if (u.size() != dims_[1] || u.size() != dims_[2])
    throw DimensionError("contract_two: vector length mismatch");
  Vector out = Vector::Zero(dims_[0]);
  for (int i = 0; i < dims_[0]; ++i) {
    double s = 0.0;
    for (int j = 0; j < dims_[1]; ++j) {
      double inner = 0.0;
      for (int k = 0; k < dims_[2]; ++k) inner += (*this)(i, j, k) * u(k);
      s += inner * u(j);
    }
    out(i) = s;
  }
  return out;
}

double Tensor3::contract_three(const Vector& u) const {
  if (u.size() != dims_[0]) throw DimensionError("contract_three: vector length mismatch");
  return u.dot(contract_two(u));
}

Tensor3 outer3(const Vector& u, const Vector& v, const Vector& w, double weight) {
  Tensor3 t(static_cast<int>(u.size()), static_cast<int>(v.size()), static_cast<int>(w.size()));
  for (int i = 0; i < u.size(); ++i)
    for (int j = 0; j < v.size(); ++j) {
      const double uv = weight * u(i) * v(j);
      for (int k = 0; k < w.size(); ++k) t(i, j, k) = uv * w(k);
    }
  return t;
}

Vector singular_values(const Matrix& a) {
  if (a.size() == 0) return Vector();
  Eigen::BDCSVD<Matrix> svd(a);
  return svd.singularValues();
}

int numerical_rank(const Matrix& a, double tol) {
  const Vector s = singular_values(a);
  return static_cast<int>((s.array() > tol).count());
}

double kth_singular_value(const Matrix& a, int k) {
  const Vector s = singular_values(a);
  if (k < 1 || k > s.size()) return 0.0;
  return s(k - 1);
}

double min_singular_value(const Matrix& a) {
  const Vector s = singular_values(a);
  return s.size() == 0 ? 0.0 : s(s.size() - 1);
}

PseudoInverse truncated_pinv(const Matrix& a, int rank, const std::string& name, double eps) {
  Eigen::BDCSVD<Matrix> svd(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const Vector& s = svd.singularValues();
  PseudoInverse out;
  out.singular_values = s;
  const double sigma_max = s.size() > 0 ? s(0) : 0.0;
  const double cut = static_cast<double>(std::max(a.rows(), a.cols())) * eps * sigma_max;
  int keep = 0;
  while (keep < s.size() && s(keep) > cut && s(keep) > 0.0) ++keep;
  if (rank >= 0) {
    if (keep < rank) throw RankDeficiencyError(name, keep, rank);
    keep = rank;
  }
  out.rank = keep;
  const Matrix& u = svd.matrixU();
  const Matrix& v = svd.matrixV();
  out.pinv = Matrix::Zero(a.cols(), a.rows());
  for (int c = 0; c < keep; ++c) out.pinv.noalias() += (v.col(c) / s(c)) * u.col(c).transpose();
  return out;
}

Vector project_to_simplex(const Vector& v) {
  const int n = static_cast<int>(v.size());
  if (n == 0) return v;
  std::vector<double> sorted(v.data(), v.data() + n);
  for (double& x : sorted)
    if (!std::isfinite(x)) x = 0.0;
  std::sort(sorted.begin(), sorted.end(), std::greater<>());
  double cumulative = 0.0;
  double theta = 0.0;
  for (int j = 0; j < n; ++j) {
    cumulative += sorted[j];
    const double candidate = (cumulative - 1.0) / (j + 1);
    if (sorted[j] - candidate > 0.0) theta = candidate;
  }
  Vector w(n);
  for (int i = 0; i < n; ++i) {
    const double x = std::isfinite(v(i)) ? v(i) : 0.0;
    w(i) = std::max(x - theta, 0.0);
  }
  return w;
}

Vector clip_and_normalize(const Vector& v, bool* degenerate) {
  Vector w = v;
  for (int i = 0; i < w.size(); ++i)
    if (!(w(i) > 0.0) || !std::isfinite(w(i))) w(i) = 0.0;
  const double total = w.sum();
  const bool bad = !(total > std::numeric_limits<double>::min());
  if (degenerate) *degenerate = bad;
  if (bad) return Vector::Constant(v.size(), v.size() > 0 ? 1.0 / v.size() : 0.0);
  w /= total;
  // Clipping to [0,1] is implied by the rescale.
  return w;
}

double l1_distance(const Vector& a, const Vector& b) { return (a - b).lpNorm<1>(); }

std::vector<int> solve_assignment(const Matrix& cost) {
  const int n = static_cast<int>(cost.rows());
  if (cost.cols() != n) throw DimensionError("solve_assignment: cost matrix must be square");
  // Potentials formulation, 1-based with a virtual column 0.
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0);
  std::vector<int> p(n + 1, 0), way(n + 1, 0);
  for (int i = 1; i <= n; ++i) {
    p[0] = i;
    int j0 = 0;
    std::vector<double> minv(n + 1, inf);
    std::vector<char> used(n + 1, 0);
    do {
      used[j0] = 1;
      const int i0 = p[j0];
      double delta = inf;
      int j1 = 0;
      for (int j = 1; j <= n; ++j) {
        if (used[j]) continue;
        const double cur = cost(i0 - 1, j - 1) - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (int j = 0; j <= n; ++j) {
        if (used[j]) {
          u[p[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (p[j0] != 0);
    do {
      const int j1 = way[j0];
      p[j0] = p[j1];
      j0 = j1;
    } while (j0 != 0);
  }
  std::vector<int> assignment(n, -1);
  for (int j = 1; j <= n; ++j)
    if (p[j] != 0) assignment[p[j] - 1] = j - 1;
  return assignment;
}

}  // namespace spomdp
