#include "spomdp/sweep.hpp"

#include "spomdp/recovery.hpp"

#include <omp.h>

#include <cmath>
#include <iomanip>
#include <limits>
#include <ostream>

namespace spomdp {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

SweepCell run_cell(const SweepConfig& config, const Vector& initial, std::size_t N,
                   std::uint64_t seed) {
  SweepCell cell;
  cell.N = N;
  cell.seed = seed;
  try {
    SimulationOptions sim;
    sim.steps = N;
    sim.seed = seed;
    sim.initial = initial;
    const Trajectory traj = simulate(config.model, config.policy, sim);
    EstimatorOptions options = config.options;
    options.power.seed = seed;
    const EstimationResult result = estimate_from_trajectory(
        config.policy, traj, config.model.R, options, config.model.reward_values);
    if (!result.estimate.complete()) {
      cell.failure = "actions failed:";
      for (const ActionReport& a : result.actions)
        if (a.status != ActionStatus::ok) cell.failure += " " + std::to_string(a.action) + " (" + a.failure + ")";
    }
    const ErrorReport errors = evaluate_errors(result.estimate, config.model);
    cell.max_err_O = errors.max_err_O;
    cell.max_err_R = errors.max_err_R;
    cell.max_err_T = errors.max_err_T;
    for (const ActionReport& a : result.actions) {
      SweepActionRow row;
      row.action = a.action;
      row.samples = a.samples;
      row.err_O = errors.action_max_err_O[a.action];
      row.err_R = errors.action_max_err_R[a.action];
      row.err_T = errors.action_max_err_T[a.action];
      if (a.bounds) {
        row.B_O = a.bounds->B_O;
        row.B_R = a.bounds->B_R;
        row.B_T = a.bounds->B_T;
      }
      row.lambda = a.lambda;
      cell.actions.push_back(row);
    }
  } catch (const Error& e) {
    cell.failure = e.what();
  }
  return cell;
}

void put(std::ostream& out, double v) {
  if (std::isfinite(v)) out << v;
}

void put(std::ostream& out, const std::optional<double>& v) {
  if (v) put(out, *v);
}

}  // namespace

void validate_sweep(const SweepConfig& config) {
  if (config.lengths.empty()) throw ValidationError("sweep: N-grid is empty");
  for (std::size_t i = 1; i < config.lengths.size(); ++i)
    if (config.lengths[i] <= config.lengths[i - 1])
      throw ValidationError("sweep: N-grid must be strictly increasing");
  if (config.seeds.empty()) throw ValidationError("sweep: seeds list is empty");
  if (config.workers < 0) throw ValidationError("sweep: workers must be nonnegative");
  const auto issues = validate_model(config.model);
  if (!issues.empty()) throw ValidationError("invalid model: " + issues.front());
  check_compatible(config.model, config.policy);
}

SweepResult run_sweep(const SweepConfig& config) {
  validate_sweep(config);
  Vector initial;
  if (config.stationary_start) initial = stationary_distribution(induced_chain(config.model, config.policy));

  const std::size_t nseeds = config.seeds.size();
  const auto ncells = static_cast<long>(config.lengths.size() * nseeds);
  SweepResult result;
  result.cells.resize(static_cast<std::size_t>(ncells));
  const int workers = config.workers > 0 ? config.workers : omp_get_max_threads();

#pragma omp parallel for schedule(dynamic) num_threads(workers)
  for (long c = 0; c < ncells; ++c) {
    const std::size_t n = static_cast<std::size_t>(c) / nseeds;
    const std::size_t s = static_cast<std::size_t>(c) % nseeds;
    result.cells[static_cast<std::size_t>(c)] =
        run_cell(config, initial, config.lengths[n], config.seeds[s]);
  }
  result.summary = summarize(result.cells, config.lengths, config.seeds);
  return result;
}

SlopeFit loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  int n = 0;
  std::vector<double> xs;
  for (std::size_t i = 0; i < x.size() && i < y.size(); ++i) {
    if (!(x[i] > 0.0) || !(y[i] > 0.0) || !std::isfinite(y[i])) continue;
    const double lx = std::log(x[i]);
    const double ly = std::log(y[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
    ++n;
    bool seen = false;
    for (double v : xs) seen = seen || v == x[i];
    if (!seen) xs.push_back(x[i]);
  }
  SlopeFit fit;
  if (xs.size() < 2) {
    fit.slope = kNaN;
    fit.intercept = kNaN;
    fit.note = "slope undefined: fewer than two distinct N with finite errors";
    return fit;
  }
  const double denom = n * sxx - sx * sx;
  fit.slope = (n * sxy - sx * sy) / denom;
  fit.intercept = (sy - fit.slope * sx) / n;
  return fit;
}

SweepSummary summarize(const std::vector<SweepCell>& cells, const std::vector<std::size_t>& lengths,
                       const std::vector<std::uint64_t>& seeds) {
  SweepSummary s;
  const std::size_t nseeds = seeds.size();
  std::vector<double> xs;
  auto cell_ok = [](const SweepCell& c) { return c.failure.empty(); };
  for (std::size_t n = 0; n < lengths.size(); ++n) {
    double o = 0.0, r = 0.0, t = 0.0;
    int count = 0;
    for (std::size_t k = 0; k < nseeds; ++k) {
      const SweepCell& c = cells[n * nseeds + k];
      if (!cell_ok(c)) {
        ++s.failed_cells;
        continue;
      }
      o += c.max_err_O;
      r += c.max_err_R;
      t += c.max_err_T;
      ++count;
    }
    s.mean_err_O.push_back(count ? o / count : kNaN);
    s.mean_err_R.push_back(count ? r / count : kNaN);
    s.mean_err_T.push_back(count ? t / count : kNaN);
    xs.push_back(static_cast<double>(lengths[n]));
  }
  s.slope_O = loglog_slope(xs, s.mean_err_O);
  s.slope_R = loglog_slope(xs, s.mean_err_R);
  s.slope_T = loglog_slope(xs, s.mean_err_T);

  if (lengths.size() >= 2) {
    const std::size_t last = (lengths.size() - 1) * nseeds;
    for (std::size_t k = 0; k < nseeds; ++k) {
      const SweepCell& lo = cells[k];
      const SweepCell& hi = cells[last + k];
      if (!cell_ok(lo) || !cell_ok(hi)) continue;
      ++s.comparable_seeds;
      s.decreasing_O += hi.max_err_O < lo.max_err_O;
      s.decreasing_R += hi.max_err_R < lo.max_err_R;
      s.decreasing_T += hi.max_err_T < lo.max_err_T;
    }
  }
  return s;
}

void write_sweep_csv(std::ostream& out, const SweepResult& result) {
  out << "N,seed,action,Nl,err_O,err_R,err_T,B_O,B_R,B_T,lambda\n";
  out << std::setprecision(17);
  for (const SweepCell& c : result.cells) {
    if (c.actions.empty()) {
      // Missing cell: keys only.
      out << c.N << ',' << c.seed << ",,,,,,,,,\n";
      continue;
    }
    for (const SweepActionRow& a : c.actions) {
      out << c.N << ',' << c.seed << ',' << a.action << ',' << a.samples << ',';
      put(out, a.err_O);
      out << ',';
      put(out, a.err_R);
      out << ',';
      put(out, a.err_T);
      out << ',';
      put(out, a.B_O);
      out << ',';
      put(out, a.B_R);
      out << ',';
      put(out, a.B_T);
      out << ',';
      put(out, a.lambda);
      out << '\n';
    }
  }
}

}  // namespace spomdp
