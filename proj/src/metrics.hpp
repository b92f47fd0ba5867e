#pragma once

#include <vector>

#include "runlog.hpp"

namespace asindy {

// Per-run planar tracking statistics [m].
struct ErrorStats {
  double rmse_xy = 0.0;
  double mae_xy = 0.0;
  double p95_xy = 0.0;
  double max_xy = 0.0;
  std::size_t n_samples = 0;
};

// Mean and sample standard deviation of each metric over runs; std is only
// meaningful for run_count >= 2 and reported as 0 otherwise.
struct AggregateStats {
  ErrorStats mean;
  ErrorStats std;
  std::size_t run_count = 0;
};

// ||e_xy(t)||_2 per sample, z excluded, restricted to t >= t_start.
std::vector<double> planar_error_series(const RunLog& log, double t_start = 0.0);

// RMSE, MAE, linear-interpolation P95, and max of a non-empty series.
ErrorStats compute_stats(const std::vector<double>& series);

AggregateStats aggregate(const std::vector<ErrorStats>& stats);

}  // namespace asindy
