#pragma once

#include <Eigen/Dense>

#include <array>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace spomdp {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

// Error hierarchy. The CLI maps these onto exit codes, so keep the split
// between "bad input" and "the estimator could not proceed" intact.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DimensionError : public Error {
 public:
  using Error::Error;
};

class ValidationError : public Error {
 public:
  using Error::Error;
};

class NotErgodicError : public Error {
 public:
  using Error::Error;
};

class RankDeficiencyError : public Error {
 public:
  RankDeficiencyError(std::string which, int rank, int required)
      : Error("rank deficiency in " + which + ": numerical rank " + std::to_string(rank) +
              " < required " + std::to_string(required)),
        which_(std::move(which)),
        rank_(rank),
        required_(required) {}

  const std::string& which() const noexcept { return which_; }
  int rank() const noexcept { return rank_; }
  int required() const noexcept { return required_; }

 private:
  std::string which_;
  int rank_;
  int required_;
};

class InsufficientSamplesError : public Error {
 public:
  using Error::Error;
};

class ConvergenceError : public Error {
 public:
  ConvergenceError(const std::string& what, double residual) : Error(what), residual_(residual) {}
  double residual() const noexcept { return residual_; }

 private:
  double residual_;
};

class DegenerateError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

/// Dense row-major order-3 tensor. Index (i, j, k) lives at (i * n1 + j) * n2 + k.
class Tensor3 {
 public:
  Tensor3() = default;
  Tensor3(int n0, int n1, int n2, double fill = 0.0)
      : dims_{n0, n1, n2}, data_(static_cast<std::size_t>(n0) * n1 * n2, fill) {
    if (n0 < 0 || n1 < 0 || n2 < 0) throw DimensionError("Tensor3: negative dimension");
  }

  int dim(int axis) const { return dims_[axis]; }
  const std::array<int, 3>& dims() const noexcept { return dims_; }
  std::size_t size() const noexcept { return data_.size(); }

  double& operator()(int i, int j, int k) { return data_[offset(i, j, k)]; }
  double operator()(int i, int j, int k) const { return data_[offset(i, j, k)]; }

  std::span<double> data() noexcept { return data_; }
  std::span<const double> data() const noexcept { return data_; }

  bool same_shape(const Tensor3& other) const noexcept { return dims_ == other.dims_; }

  Tensor3& operator+=(const Tensor3& other);
  Tensor3& operator*=(double s);

  /// Average over the six index permutations. Requires a cubical tensor.
  Tensor3 symmetrized() const;

  double frobenius_norm() const;
  double max_abs_diff(const Tensor3& other) const;

  /// T(I, u, u): contraction of the last two modes with u.
  Vector contract_two(const Vector& u) const;
  /// T(u, u, u).
  double contract_three(const Vector& u) const;

  bool operator==(const Tensor3& other) const = default;

 private:
  std::size_t offset(int i, int j, int k) const noexcept {
    return (static_cast<std::size_t>(i) * dims_[1] + j) * dims_[2] + k;
  }

  std::array<int, 3> dims_{0, 0, 0};
  std::vector<double> data_;
};

/// u ⊗ v ⊗ w, scaled by weight.
Tensor3 outer3(const Vector& u, const Vector& v, const Vector& w, double weight = 1.0);

}  // namespace spomdp
