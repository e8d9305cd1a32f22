#include "spomdp/views.hpp"

#include "spomdp/linalg.hpp"

namespace spomdp {

int ViewEncoding::dim(int view) const {
  switch (view) {
    case 1: return d1();
    case 2: return d2();
    case 3: return d3();
    default: throw DimensionError("view index must be 1, 2 or 3");
  }
}

int ViewEncoding::first_index(int k, int n, int m) const {
  if (k < 0 || k >= A || n < 0 || n >= Y || m < 0 || m >= R)
    throw DimensionError("first view index out of range");
  return (k * Y + n) * R + m;
}

std::array<int, 3> ViewEncoding::decode_first(int s) const {
  if (s < 0 || s >= d1()) throw DimensionError("first view code out of range");
  return {s / (Y * R), (s / R) % Y, s % R};
}

int ViewEncoding::second_index(int n, int m) const {
  if (n < 0 || n >= Y || m < 0 || m >= R) throw DimensionError("second view index out of range");
  return n * R + m;
}

std::pair<int, int> ViewEncoding::decode_second(int s) const {
  if (s < 0 || s >= d2()) throw DimensionError("second view code out of range");
  return {s / R, s % R};
}

int first_view_index(int k, int n, int m, const ViewEncoding& enc) {
  return enc.first_index(k, n, m);
}

int second_view_index(int n, int m, const ViewEncoding& enc) { return enc.second_index(n, m); }

const Matrix& ViewMatrices::view(int nu) const {
  switch (nu) {
    case 1: return V1;
    case 2: return V2;
    case 3: return V3;
    default: throw DimensionError("view index must be 1, 2 or 3");
  }
}

ViewEncoding encoding_for(const PomdpModel& model) { return ViewEncoding{model.Y, model.A, model.R}; }

ActionViewSamples collect_views(const Trajectory& traj, int l, const ViewEncoding& enc) {
  ActionViewSamples out;
  out.action = l;
  const std::size_t n = traj.size();
  if (n < 3) return out;
  for (std::size_t t = 1; t + 1 < n; ++t) {
    const Step& mid = traj.steps[t];
    if (mid.a != l) continue;
    const Step& prev = traj.steps[t - 1];
    const Step& next = traj.steps[t + 1];
    out.triples.push_back(ViewTriple{enc.first_index(prev.a, prev.y, prev.r),
                                     enc.second_index(mid.y, mid.r), next.y});
  }
  return out;
}

ViewMatrices view_matrices_unchecked(const PomdpModel& model, const MemorylessPolicy& policy,
                                     int l) {
  check_compatible(model, policy);
  if (l < 0 || l >= model.A) throw DimensionError("action index out of range");
  const ViewEncoding enc = encoding_for(model);
  const int X = model.X;
  const Vector omega = stationary_distribution(induced_chain(model, policy));
  const Vector p_l = action_given_state(model, policy, l);

  ViewMatrices vm;
  vm.action = l;
  vm.V3 = model.O * model.transition_slice(l).transpose();

  vm.V2 = Matrix::Zero(enc.d2(), X);
  for (int i = 0; i < X; ++i)
    for (int n = 0; n < model.Y; ++n)
      for (int m = 0; m < model.R; ++m)
        vm.V2(enc.second_index(n, m), i) =
            model.O(n, i) * policy.Pi(n, l) * model.Gamma(i, l, m) / p_l(i);

  // Bayes inversion over the predecessor state j.
  vm.V1 = Matrix::Zero(enc.d1(), X);
  for (int i = 0; i < X; ++i)
    for (int k = 0; k < model.A; ++k)
      for (int n = 0; n < model.Y; ++n)
        for (int m = 0; m < model.R; ++m) {
          double s = 0.0;
          for (int j = 0; j < X; ++j)
            s += omega(j) * model.O(n, j) * policy.Pi(n, k) * model.Gamma(j, k, m) *
                 model.T(j, i, k);
          vm.V1(enc.first_index(k, n, m), i) = s / omega(i);
        }
  return vm;
}

ViewMatrices true_view_matrices(const PomdpModel& model, const MemorylessPolicy& policy, int l) {
  ViewMatrices vm = view_matrices_unchecked(model, policy, l);
  const char* names[] = {"V1", "V2", "V3"};
  for (int nu = 1; nu <= 3; ++nu) {
    const int rank = numerical_rank(vm.view(nu), kRankTol);
    if (rank < model.X)
      throw RankDeficiencyError(std::string(names[nu - 1]) + " (action " + std::to_string(l) + ")",
                                rank, model.X);
  }
  return vm;
}

}  // namespace spomdp
