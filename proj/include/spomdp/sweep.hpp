#pragma once

#include "spomdp/model.hpp"
#include "spomdp/pipeline.hpp"

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace spomdp {

struct SweepConfig {
  PomdpModel model;
  MemorylessPolicy policy;
  /// Strictly increasing trajectory lengths.
  std::vector<std::size_t> lengths;
  std::vector<std::uint64_t> seeds;
  EstimatorOptions options;
  /// Start from the stationary distribution instead of uniform.
  bool stationary_start = false;
  /// 0 means the OpenMP default.
  int workers = 0;
};

struct SweepActionRow {
  int action = 0;
  std::size_t samples = 0;
  double err_O = 0.0;
  double err_R = 0.0;
  double err_T = 0.0;
  std::optional<double> B_O, B_R, B_T, lambda;
};

struct SweepCell {
  std::size_t N = 0;
  std::uint64_t seed = 0;
  /// Empty on success.
  std::string failure;
  double max_err_O = 0.0;
  double max_err_R = 0.0;
  double max_err_T = 0.0;
  std::vector<SweepActionRow> actions;
};

struct SlopeFit {
  double slope = 0.0;
  double intercept = 0.0;
  std::string note;
};

struct SweepSummary {
  /// Mean of the per-cell max error for each N (NaN when every cell failed).
  std::vector<double> mean_err_O, mean_err_R, mean_err_T;
  SlopeFit slope_O, slope_R, slope_T;
  /// Seeds whose error at the largest N is below the error at the smallest N.
  int decreasing_O = 0, decreasing_R = 0, decreasing_T = 0;
  int comparable_seeds = 0;
  int failed_cells = 0;
};

struct SweepResult {
  std::vector<SweepCell> cells;  // ordered by (N, seed)
  SweepSummary summary;
};

void validate_sweep(const SweepConfig& config);

/// Cells run concurrently; each is a pure function of (N, seed).
SweepResult run_sweep(const SweepConfig& config);

/// Least-squares fit of log y against log x. Points with non-finite or
/// non-positive y are skipped; fewer than two distinct x give NaN and a note.
SlopeFit loglog_slope(const std::vector<double>& x, const std::vector<double>& y);

SweepSummary summarize(const std::vector<SweepCell>& cells, const std::vector<std::size_t>& lengths,
                       const std::vector<std::uint64_t>& seeds);

/// N,seed,action,Nl,err_O,err_R,err_T,B_O,B_R,B_T,lambda
void write_sweep_csv(std::ostream& out, const SweepResult& result);

}  // namespace spomdp
