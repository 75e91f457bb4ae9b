#pragma once

#include <algorithm>
#include <cmath>
#include <map>
#include <optional>
#include <span>
#include <vector>

#include "lrm/error.hpp"
#include "lrm/time_series.hpp"

namespace lrm {

inline double mean(std::span<const double> x) {
  double s = 0.0;
  for (double v : x) s += v;
  return s / static_cast<double>(x.size());
}

/// Sample variance about `center`, divisor n-1.
inline double sample_variance(std::span<const double> x, double center) {
  double ss = 0.0;
  for (double v : x) ss += (v - center) * (v - center);
  return ss / static_cast<double>(x.size() - 1);
}

inline double sample_variance(std::span<const double> x) { return sample_variance(x, mean(x)); }

inline double sample_std(std::span<const double> x) { return std::sqrt(sample_variance(x)); }

/// Median with the midpoint convention for even lengths.
inline double median(std::span<const double> x) {
  if (x.empty()) throw ValidationError("median of empty sequence");
  std::vector<double> s(x.begin(), x.end());
  std::sort(s.begin(), s.end());
  const std::size_t n = s.size();
  return n % 2 ? s[n / 2] : 0.5 * (s[n / 2 - 1] + s[n / 2]);
}

/// Descriptive statistics of a series (sample divisor n-1 throughout).
struct SummaryStats {
  std::size_t n = 0;
  double mean = 0.0;
  double median = 0.0;
  double mode_first = 0.0;
  /// Absent when the rounded data has a single distinct value.
  std::optional<double> mode_second;
  std::size_t mode_first_count = 0;
  std::size_t mode_second_count = 0;
  double std_dev = 0.0;
  double mean_abs_dev = 0.0;
  double variance = 0.0;
  /// 100·std/|mean|; absent when mean or std is zero.
  std::optional<double> cv_percent;
};

/**
 * Full descriptive summary.
 *
 * Modes are taken over values rounded to the nearest multiple of `mode_resolution`.
 * Ranking is by descending count, ties resolved toward the smaller value.
 */
inline SummaryStats summarize(const TimeSeries& ts, double mode_resolution = 0.1) {
  if (ts.size() < 2) throw ValidationError("summarize needs at least 2 samples");
  if (!(mode_resolution > 0.0) || !std::isfinite(mode_resolution))
    throw ValidationError("mode_resolution must be positive and finite");

  const auto x = ts.values();
  SummaryStats s;
  s.n = x.size();
  s.mean = mean(x);
  s.median = median(x);
  s.variance = sample_variance(x, s.mean);
  s.std_dev = std::sqrt(s.variance);

  double mad = 0.0;
  for (double v : x) mad += std::abs(v - s.mean);
  s.mean_abs_dev = mad / static_cast<double>(s.n);

  if (s.mean != 0.0 && s.std_dev > 0.0) s.cv_percent = 100.0 * s.std_dev / std::abs(s.mean);

  std::map<long long, std::size_t> counts;
  for (double v : x) ++counts[std::llround(v / mode_resolution)];
  std::vector<std::pair<long long, std::size_t>> ranked(counts.begin(), counts.end());
  std::stable_sort(ranked.begin(), ranked.end(),
                   [](const auto& a, const auto& b) { return a.second > b.second; });
  // Dividing by the reciprocal gives 0.3 rather than 3 * 0.1 = 0.30000000000000004.
  const double per_unit = 1.0 / mode_resolution;
  s.mode_first = static_cast<double>(ranked[0].first) / per_unit;
  s.mode_first_count = ranked[0].second;
  if (ranked.size() > 1) {
    s.mode_second = static_cast<double>(ranked[1].first) / per_unit;
    s.mode_second_count = ranked[1].second;
  }
  return s;
}

/// Zero-mean, unit-sample-std copy. Throws NumericError on a constant series.
inline TimeSeries standardize(const TimeSeries& ts) {
  if (ts.size() < 2) throw ValidationError("standardize needs at least 2 samples");
  const auto x = ts.values();
  const double m = mean(x);
  const double sd = std::sqrt(sample_variance(x, m));
  if (!(sd > 0.0)) throw NumericError("cannot standardize a constant series (zero variance)");
  std::vector<double> out(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) out[i] = (x[i] - m) / sd;
  return ts.with_values(std::move(out));
}

}  // namespace lrm
