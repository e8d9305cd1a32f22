#include "spomdp/tensor_decomp.hpp"

#include "spomdp/kernels.hpp"
#include "spomdp/linalg.hpp"
#include "spomdp/rng.hpp"

#include <cmath>
#include <limits>

namespace spomdp {

namespace {

constexpr double kEigenFloor = 1e-12;

struct RestartResult {
  Vector u;
  double lambda = 0.0;
  int iterations = 0;
  double step = std::numeric_limits<double>::infinity();
  bool converged = false;
};

// u <- T(I,u,u) / ||T(I,u,u)|| until the sign-invariant change drops below tol.
void iterate(const Tensor3& t, RestartResult& r, int sweeps, double tol) {
  for (int it = 0; it < sweeps; ++it) {
    Vector v = t.contract_two(r.u);
    const double norm = v.norm();
    if (!(norm > 0.0)) break;
    v /= norm;
    r.step = std::min((v - r.u).norm(), (v + r.u).norm());
    r.u = std::move(v);
    ++r.iterations;
    if (r.step < tol) {
      r.converged = true;
      break;
    }
  }
  r.lambda = t.contract_three(r.u);
}

RestartResult run_restart(const Tensor3& t, std::uint64_t seed, int component, int restart,
                          int sweeps, double tol) {
  const int k = t.dim(0);
  Rng rng = Rng::derived(seed, {static_cast<std::uint64_t>(component),
                                static_cast<std::uint64_t>(restart)});
  RestartResult r;
  r.u = Vector(k);
  for (int i = 0; i < k; ++i) r.u(i) = rng.normal();
  const double n = r.u.norm();
  if (n > 0.0) r.u /= n;
  else r.u = Vector::Unit(k, 0);
  iterate(t, r, sweeps, tol);
  return r;
}

}  // namespace

WhiteningTransform whiten(const Matrix& m2, int X) {
  if (m2.rows() != m2.cols()) throw DimensionError("whiten: M2 must be square");
  if (X < 1 || X > m2.rows()) throw DimensionError("whiten: target rank out of range");
  const Matrix sym = symmetric_part(m2);
  Eigen::SelfAdjointEigenSolver<Matrix> eig(sym);
  const Vector& values = eig.eigenvalues();  // ascending
  const int d = static_cast<int>(sym.rows());
  WhiteningTransform wt;
  wt.eigenvalues.resize(X);
  wt.W.resize(d, X);
  for (int c = 0; c < X; ++c) {
    const int idx = d - 1 - c;
    wt.eigenvalues(c) = values(idx);
  }
  if (!(wt.eigenvalues(X - 1) > kEigenFloor)) {
    const int positive = static_cast<int>((wt.eigenvalues.array() > kEigenFloor).count());
    throw RankDeficiencyError("M2", positive, X);
  }
  for (int c = 0; c < X; ++c)
    wt.W.col(c) = eig.eigenvectors().col(d - 1 - c) / std::sqrt(wt.eigenvalues(c));
  wt.B = sym * wt.W;
  return wt;
}

Tensor3 whitened_tensor(const Tensor3& m3, const Matrix& w) { return kernels::multilinear(m3, w); }

EigenComponents tensor_power_iteration(const Tensor3& tensor, int components,
                                       const PowerIterationOptions& options) {
  const int k = tensor.dim(0);
  if (tensor.dim(1) != k || tensor.dim(2) != k)
    throw DimensionError("tensor_power_iteration: tensor must be cubical");
  if (components < 1 || components > k)
    throw DimensionError("tensor_power_iteration: component count out of range");
  if (options.restarts < 1 || options.sweeps < 1 || !(options.tol > 0.0))
    throw ValidationError("tensor_power_iteration: restarts, sweeps and tol must be positive");

  Tensor3 work = options.symmetrize ? tensor.symmetrized() : tensor;
  EigenComponents out;
  out.vectors = Matrix::Zero(k, components);

  for (int c = 0; c < components; ++c) {
    std::vector<RestartResult> runs(options.restarts);
#pragma omp parallel for schedule(dynamic) if (options.parallel)
    for (int r = 0; r < options.restarts; ++r)
      runs[r] = run_restart(work, options.seed, c, r, options.sweeps, options.tol);

    int best = 0;
    int converged = 0;
    for (int r = 0; r < options.restarts; ++r) {
      if (runs[r].converged) ++converged;
      if (std::abs(runs[r].lambda) > std::abs(runs[best].lambda)) best = r;
    }
    RestartResult chosen = runs[best];
    if (!chosen.converged) iterate(work, chosen, options.sweeps, options.tol);
    if (!chosen.converged)
      throw ConvergenceError("tensor power iteration did not converge for component " +
                                 std::to_string(c) + " (step " + std::to_string(chosen.step) + ")",
                             chosen.step);

    ComponentDiagnostics diag;
    diag.restarts = options.restarts;
    diag.restarts_converged = converged;
    diag.best_restart = best;
    diag.iterations = chosen.iterations;
    diag.final_step = chosen.step;
    if (chosen.lambda < 0.0) {
      chosen.lambda = -chosen.lambda;
      chosen.u = -chosen.u;
      diag.sign_flipped = true;
    }
    diag.lambda = chosen.lambda;

    work += outer3(chosen.u, chosen.u, chosen.u, -chosen.lambda);
    out.lambdas.push_back(chosen.lambda);
    out.vectors.col(c) = chosen.u;
    out.diagnostics.push_back(diag);
  }
  out.deflation_residual = work.frobenius_norm();
  return out;
}

UnwhitenedComponents unwhiten(const EigenComponents& components,
                              const WhiteningTransform& transform) {
  const int X = static_cast<int>(components.lambdas.size());
  if (transform.B.cols() != X || components.vectors.rows() != X)
    throw DimensionError("unwhiten: component count does not match the whitening rank");
  UnwhitenedComponents out;
  const int d = static_cast<int>(transform.B.rows());
  out.weights.resize(X);
  out.columns_raw.resize(d, X);
  out.columns.resize(d, X);
  out.degenerate.assign(X, false);
  for (int i = 0; i < X; ++i) {
    const double lambda = components.lambdas[i];
    if (!(lambda > kEigenFloor))
      throw DegenerateError("degenerate tensor component " + std::to_string(i) +
                            " (lambda = " + std::to_string(lambda) + ")");
    out.weights(i) = 1.0 / (lambda * lambda);
    out.columns_raw.col(i) = lambda * (transform.B * components.vectors.col(i));
    bool degenerate = false;
    out.columns.col(i) = clip_and_normalize(out.columns_raw.col(i), &degenerate);
    out.degenerate[i] = degenerate;
  }
  return out;
}

Decomposition decompose(const Matrix& m2, const Tensor3& m3, int X,
                        const PowerIterationOptions& options) {
  Decomposition d;
  d.transform = whiten(m2, X);
  const Tensor3 t = whitened_tensor(m3, d.transform.W);
  d.components = tensor_power_iteration(t, X, options);
  d.recovered = unwhiten(d.components, d.transform);
  return d;
}

}  // namespace spomdp
