#include "metrics.hpp"

#include <algorithm>
#include <cmath>

#include "errors.hpp"

namespace asindy {

std::vector<double> planar_error_series(const RunLog& log, double t_start) {
  std::vector<double> out;
  out.reserve(log.rows.size());
  for (const RunLogRow& r : log.rows) {
    if (r.t < t_start) continue;
    out.push_back(std::hypot(r.p.x() - r.p_d.x(), r.p.y() - r.p_d.y()));
  }
  return out;
}

ErrorStats compute_stats(const std::vector<double>& series) {
  if (series.empty()) throw DataError("metrics: empty error series");

  ErrorStats st;
  st.n_samples = series.size();
  double sq = 0.0, abs_sum = 0.0;
  for (double v : series) {
    sq += v * v;
    abs_sum += v;
    st.max_xy = std::max(st.max_xy, v);
  }
  st.rmse_xy = std::sqrt(sq / static_cast<double>(series.size()));
  st.mae_xy = abs_sum / static_cast<double>(series.size());

  std::vector<double> sorted = series;
  std::sort(sorted.begin(), sorted.end());
  const double rank = 0.95 * static_cast<double>(sorted.size() - 1);
  const auto lo = static_cast<std::size_t>(rank);
  const double frac = rank - static_cast<double>(lo);
  st.p95_xy = lo + 1 < sorted.size()
                  ? sorted[lo] + frac * (sorted[lo + 1] - sorted[lo])
                  : sorted[lo];

  if (!(st.mae_xy <= st.rmse_xy * (1.0 + 1e-12)) ||
      !(st.p95_xy <= st.max_xy * (1.0 + 1e-12))) {
    throw DataError("metrics: ordering invariant violated");
  }
  return st;
}

AggregateStats aggregate(const std::vector<ErrorStats>& stats) {
  if (stats.empty()) throw DataError("metrics: no runs to aggregate");

  AggregateStats agg;
  agg.run_count = stats.size();
  const double n = static_cast<double>(stats.size());

  auto fold = [&](auto member) {
    double mean = 0.0;
    for (const auto& s : stats) mean += s.*member;
    mean /= n;
    double var = 0.0;
    if (stats.size() >= 2) {
      for (const auto& s : stats) {
        const double d = s.*member - mean;
        var += d * d;
      }
      var /= (n - 1.0);
    }
    return std::pair<double, double>{mean, std::sqrt(var)};
  };

  std::tie(agg.mean.rmse_xy, agg.std.rmse_xy) = fold(&ErrorStats::rmse_xy);
  std::tie(agg.mean.mae_xy, agg.std.mae_xy) = fold(&ErrorStats::mae_xy);
  std::tie(agg.mean.p95_xy, agg.std.p95_xy) = fold(&ErrorStats::p95_xy);
  std::tie(agg.mean.max_xy, agg.std.max_xy) = fold(&ErrorStats::max_xy);
  return agg;
}

}  // namespace asindy
