#pragma once

#include <algorithm>
#include <cmath>
#include <numbers>
#include <span>
#include <string>
#include <vector>

#include "lrm/error.hpp"
#include "lrm/regression.hpp"
#include "lrm/stats.hpp"
#include "lrm/time_series.hpp"

namespace lrm {

/**
 * Rescaled adjusted range of one block.
 *
 * With partial sums Y_k and adjusted deviations D_k = Y_k - (k/n)·Y_n for k = 1..n,
 * R = max D_k - min D_k and S is the sample standard deviation (divisor n-1).
 * Throws NumericError for a constant block.
 */
inline double rs_statistic(std::span<const double> x) {
  const std::size_t n = x.size();
  if (n < 2) throw ValidationError("rescaled range needs at least 2 samples");
  double total = 0.0;
  for (double v : x) total += v;
  const double sd = sample_std(x);
  if (!(sd > 0.0)) throw NumericError("constant block: rescaled range undefined (zero variance)");

  const double nd = static_cast<double>(n);
  double partial = 0.0, lo = 0.0, hi = 0.0;
  for (std::size_t k = 1; k <= n; ++k) {
    partial += x[k - 1];
    const double dev = partial - static_cast<double>(k) / nd * total;
    if (k == 1 || dev < lo) lo = dev;
    if (k == 1 || dev > hi) hi = dev;
  }
  return (hi - lo) / sd;
}

/// Aggregated R/S over the non-overlapping blocks of one window size.
struct RsPoint {
  std::size_t window = 0;
  double mean_rs = 0.0;
  /// Sample std of per-block R/S; 0 for a single block.
  double std_rs = 0.0;
  std::size_t blocks = 0;
};

struct RsTable {
  std::vector<RsPoint> points;
  /// Zero-variance blocks left out of the averages.
  std::size_t skipped_blocks = 0;
};

/// Factor-2 ladder min_window, 2·min_window, ... <= n/2, then n/2 and n.
inline std::vector<std::size_t> geometric_windows(std::size_t n, std::size_t min_window) {
  std::vector<std::size_t> w;
  for (std::size_t s = min_window; s <= n / 2; s *= 2) w.push_back(s);
  w.push_back(n / 2);
  w.push_back(n);
  std::sort(w.begin(), w.end());
  w.erase(std::unique(w.begin(), w.end()), w.end());
  std::erase_if(w, [&](std::size_t s) { return s < min_window; });
  return w;
}

inline constexpr std::size_t kDefaultMinWindow = 16;

/// R/S per window over consecutive blocks; the tail remainder is discarded.
inline RsTable rs_table(std::span<const double> x, std::span<const std::size_t> windows) {
  RsTable t;
  for (std::size_t w : windows) {
    if (w < 2 || w > x.size()) throw ValidationError("window " + std::to_string(w) + " out of range");
    const std::size_t nb = x.size() / w;
    std::vector<double> rs;
    rs.reserve(nb);
    for (std::size_t b = 0; b < nb; ++b) {
      const auto block = x.subspan(b * w, w);
      if (!(sample_variance(block) > 0.0)) {
        ++t.skipped_blocks;
        continue;
      }
      rs.push_back(rs_statistic(block));
    }
    if (rs.empty()) continue;
    RsPoint p;
    p.window = w;
    p.blocks = rs.size();
    p.mean_rs = mean(rs);
    p.std_rs = rs.size() > 1 ? std::sqrt(sample_variance(rs, p.mean_rs)) : 0.0;
    t.points.push_back(p);
  }
  if (t.points.empty()) throw NumericError("every block is constant; rescaled range undefined");
  return t;
}

inline RsTable rs_table(const TimeSeries& ts, std::size_t min_window = kDefaultMinWindow) {
  if (min_window < 2) throw ValidationError("min_window must be at least 2");
  if (ts.size() < 2 * min_window)
    throw ValidationError("series too short: need at least " + std::to_string(2 * min_window) +
                          " samples for min_window " + std::to_string(min_window));
  const auto w = geometric_windows(ts.size(), min_window);
  return rs_table(ts.values(), w);
}

struct HurstEstimate {
  double h = 0.0;
  double std_err = 0.0;
  double r_squared = 0.0;
  bool weighted = false;
  double fractal_dimension = 0.0;
  std::size_t points_used = 0;

  /// Outside (0, 1): reported, not clamped.
  bool out_of_range() const { return !(h > 0.0 && h < 1.0); }
};

/**
 * Slope of log2(mean_rs) on log2(window).
 *
 * The weighted fit uses weights 1/std_rs². Points with std_rs = 0 (single block)
 * get the largest finite weight among the others; if every point has
 * std_rs = 0 the fit falls back to unit weights.
 */
inline HurstEstimate fit_h(std::span<const RsPoint> points, bool weighted) {
  if (points.size() < 3) throw ValidationError("Hurst fit needs at least 3 points");
  std::vector<std::size_t> ws;
  for (const auto& p : points) ws.push_back(p.window);
  std::sort(ws.begin(), ws.end());
  if (std::adjacent_find(ws.begin(), ws.end()) != ws.end())
    throw ValidationError("Hurst fit needs distinct windows");

  std::vector<double> lx, ly, wt;
  for (const auto& p : points) {
    if (!(p.mean_rs > 0.0)) throw ValidationError("mean R/S must be positive");
    lx.push_back(std::log2(static_cast<double>(p.window)));
    ly.push_back(std::log2(p.mean_rs));
  }
  if (weighted) {
    double max_w = 0.0;
    for (const auto& p : points)
      if (p.std_rs > 0.0) max_w = std::max(max_w, 1.0 / (p.std_rs * p.std_rs));
    for (const auto& p : points)
      wt.push_back(max_w == 0.0 ? 1.0 : p.std_rs > 0.0 ? 1.0 / (p.std_rs * p.std_rs) : max_w);
  }
  const auto f = fit_line(lx, ly, wt);
  HurstEstimate e;
  e.h = f.slope;
  e.std_err = f.slope_std_err;
  e.r_squared = f.r_squared;
  e.weighted = weighted;
  e.fractal_dimension = 1.0 / f.slope;
  e.points_used = points.size();
  return e;
}

/**
 * Expected R/S of an i.i.d. Gaussian block of length w (Anis–Lloyd with the
 * Peters (w - 1/2)/w factor). Gamma-ratio form for w <= 340, asymptotic above.
 */
inline double expected_rs(std::size_t w) {
  if (w < 2) throw ValidationError("expected R/S needs w >= 2");
  const double n = static_cast<double>(w);
  double sum = 0.0;
  for (std::size_t i = 1; i < w; ++i) sum += std::sqrt((n - static_cast<double>(i)) / static_cast<double>(i));
  const double ratio = (n - 0.5) / n * sum;
  if (w > 340) return ratio / std::sqrt(0.5 * std::numbers::pi * n);
  return std::exp(std::lgamma(0.5 * (n - 1.0)) - std::lgamma(0.5 * n)) / std::sqrt(std::numbers::pi) * ratio;
}

struct HurstSuite {
  double h_simple = 0.0;
  double h_corrected_rs = 0.0;
  double h_empirical = 0.0;
  double h_corrected_empirical = 0.0;
  double h_theoretical = 0.0;

  /// Length actually analysed by the divisor ladder.
  std::size_t analysed_length = 0;
  std::vector<std::size_t> halving_windows;
  std::vector<std::size_t> divisor_windows;
  std::vector<double> divisor_mean_rs;
  std::vector<double> divisor_expected_rs;
};

namespace detail {

inline std::vector<std::size_t> divisors_from(std::size_t n, std::size_t lo) {
  std::vector<std::size_t> d;
  for (std::size_t k = lo; k <= n / 2; ++k)
    if (n % k == 0) d.push_back(k);
  return d;
}

inline double loglog_slope(std::span<const std::size_t> w, std::span<const double> v) {
  std::vector<double> lx, ly;
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (!(v[i] > 0.0)) throw NumericError("non-positive R/S value in log-log fit");
    lx.push_back(std::log2(static_cast<double>(w[i])));
    ly.push_back(std::log2(v[i]));
  }
  return fit_line(lx, ly).slope;
}

inline std::vector<double> mean_rs_exact(std::span<const double> x, std::span<const std::size_t> windows) {
  const auto t = rs_table(x, windows);
  if (t.points.size() != windows.size()) throw NumericError("constant blocks at every offset of some window");
  std::vector<double> m;
  for (const auto& p : t.points) m.push_back(p.mean_rs);
  return m;
}

}  // namespace detail

/**
 * Five R/S Hurst variants.
 *
 * An odd-length series is extended by the mean of its last two samples. The
 * "divisor ladder" trims the series to the length in [0.99·N, N] with the most
 * divisors >= the minimum block (50, reduced to max(4, N/8) for short series),
 * and uses those divisors as block sizes. When that interval offers fewer than
 * three divisors the search extends down to 3N/4. The "halving ladder" uses N, N/2, N/4,
 * ... down to 8 samples.
 *
 *   h_simple              slope of raw mean R/S on the halving ladder
 *   h_empirical           slope of raw mean R/S on the divisor ladder
 *   h_theoretical         slope of expected_rs on the divisor ladder
 *   h_corrected_rs        slope of R/S - E[R/S] + sqrt(pi·w/2) on the divisor ladder
 *   h_corrected_empirical 0.5 + h_empirical - h_theoretical
 */
inline HurstSuite hurst_suite(const TimeSeries& ts) {
  if (ts.size() < 32) throw ValidationError("Hurst suite needs at least 32 samples");
  std::vector<double> x(ts.values().begin(), ts.values().end());
  if (x.size() % 2) x.push_back(0.5 * (x[x.size() - 2] + x[x.size() - 1]));
  const std::size_t n = x.size();

  HurstSuite s;
  for (std::size_t w = n; w >= 8; w /= 2) s.halving_windows.push_back(w);
  std::reverse(s.halving_windows.begin(), s.halving_windows.end());

  const std::size_t min_block = std::min<std::size_t>(50, std::max<std::size_t>(4, n / 8));
  const std::size_t lo = std::min(static_cast<std::size_t>(0.99 * static_cast<double>(n)), n - 1);
  std::size_t best_n = lo;
  auto best = detail::divisors_from(lo, min_block);
  for (std::size_t m = lo + 1; m <= n; ++m) {
    auto d = detail::divisors_from(m, min_block);
    if (d.size() > best.size()) {
      best_n = m;
      best = std::move(d);
    }
  }
  // Short series rarely have three divisors near N; widen the search down to 3N/4.
  for (std::size_t m = lo; best.size() < 3 && m > 3 * n / 4;) {
    auto d = detail::divisors_from(--m, min_block);
    if (d.size() > best.size()) {
      best_n = m;
      best = std::move(d);
    }
  }
  if (best.size() < 3) throw ValidationError("series too short for a divisor ladder");
  s.analysed_length = best_n;
  s.divisor_windows = best;

  const std::span<const double> full(x);
  const auto trimmed = full.first(best_n);

  const auto rs_half = detail::mean_rs_exact(full, s.halving_windows);
  s.h_simple = detail::loglog_slope(s.halving_windows, rs_half);

  const auto rs_emp = detail::mean_rs_exact(trimmed, s.divisor_windows);
  std::vector<double> ers, corrected;
  for (std::size_t i = 0; i < best.size(); ++i) {
    const double e = expected_rs(best[i]);
    ers.push_back(e);
    corrected.push_back(rs_emp[i] - e + std::sqrt(0.5 * std::numbers::pi * static_cast<double>(best[i])));
  }
  s.h_empirical = detail::loglog_slope(best, rs_emp);
  s.h_theoretical = detail::loglog_slope(best, ers);
  s.h_corrected_rs = detail::loglog_slope(best, corrected);
  s.h_corrected_empirical = 0.5 + s.h_empirical - s.h_theoretical;
  s.divisor_mean_rs = rs_emp;
  s.divisor_expected_rs = std::move(ers);
  return s;
}

/// Correlation of successive increments: inverts 2^{2h} = 2 + 2·rho.
inline double fractal_correlation(double h) {
  if (!(h > 0.0 && h < 1.0)) throw ValidationError("fractal correlation needs 0 < h < 1");
  return std::exp2(2.0 * h - 1.0) - 1.0;
}

inline double fractal_dimension(double h) {
  if (!(h > 0.0)) throw ValidationError("fractal dimension needs h > 0");
  return 1.0 / h;
}

}  // namespace lrm
