#pragma once

#include "spomdp/types.hpp"

#include <cstdint>
#include <vector>

namespace spomdp {

/// W (d x X) with W^T M2 W = I_X, and B = M2 W for mapping back.
struct WhiteningTransform {
  Matrix W;
  Matrix B;
  /// Top-X eigenvalues of the symmetrized M2, descending.
  Vector eigenvalues;
};

/// Rank-X eigendecomposition of (M2 + M2^T)/2. Throws RankDeficiencyError
/// when the X-th eigenvalue is at or below 1e-12.
WhiteningTransform whiten(const Matrix& m2, int X);

/// M3(W, W, W).
Tensor3 whitened_tensor(const Tensor3& m3, const Matrix& w);

struct PowerIterationOptions {
  int restarts = 50;
  int sweeps = 100;
  double tol = 1e-10;
  std::uint64_t seed = 0;
  /// Average the tensor over index permutations before iterating.
  bool symmetrize = true;
  /// Run restarts of one component concurrently.
  bool parallel = true;
};

struct ComponentDiagnostics {
  double lambda = 0.0;
  int restarts = 0;
  int restarts_converged = 0;
  int best_restart = -1;
  int iterations = 0;
  /// Sign-invariant change of the final power step.
  double final_step = 0.0;
  bool sign_flipped = false;
};

struct EigenComponents {
  std::vector<double> lambdas;
  /// Unit eigenvectors as columns.
  Matrix vectors;
  std::vector<ComponentDiagnostics> diagnostics;
  /// Frobenius norm of the tensor left after deflating every component.
  double deflation_residual = 0.0;
};

/// Robust tensor power method with deflation. Restart streams are derived
/// from (seed, component, restart), so the result does not depend on
/// whether restarts run in parallel.
EigenComponents tensor_power_iteration(const Tensor3& tensor, int components,
                                       const PowerIterationOptions& options = {});

struct UnwhitenedComponents {
  /// omega_i = lambda_i^{-2}
  Vector weights;
  /// lambda_i B u_i, unnormalized.
  Matrix columns_raw;
  /// Negatives clipped and columns rescaled to unit sum.
  Matrix columns;
  std::vector<bool> degenerate;
};

/// Throws DegenerateError when some lambda_i <= 1e-12.
UnwhitenedComponents unwhiten(const EigenComponents& components, const WhiteningTransform& transform);

struct Decomposition {
  WhiteningTransform transform;
  EigenComponents components;
  UnwhitenedComponents recovered;
};

/// whiten -> whitened_tensor -> tensor_power_iteration -> unwhiten.
Decomposition decompose(const Matrix& m2, const Tensor3& m3, int X,
                        const PowerIterationOptions& options = {});

}  // namespace spomdp
