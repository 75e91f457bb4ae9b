#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include "lrm/error.hpp"
#include "lrm/parallel.hpp"
#include "lrm/random.hpp"
#include "lrm/regression.hpp"
#include "lrm/stats.hpp"
#include "lrm/time_series.hpp"

namespace lrm {

/// Delay vectors (x_i, x_{i+d}, ..., x_{i+(m-1)d}) for i = 0 .. n-(m-1)d-1.
inline std::vector<std::vector<double>> embed(std::span<const double> x, std::size_t m, std::size_t d) {
  if (m < 1 || d < 1) throw ValidationError("embedding needs m >= 1 and d >= 1");
  const std::size_t span = (m - 1) * d;
  if (x.size() <= span) throw ValidationError("series too short for embedding dimension and delay");
  std::vector<std::vector<double>> out(x.size() - span, std::vector<double>(m));
  for (std::size_t i = 0; i < out.size(); ++i)
    for (std::size_t c = 0; c < m; ++c) out[i][c] = x[i + c * d];
  return out;
}

enum class ReferenceSampling { even, random };

/// Defaults target monthly climate indices.
struct EmbeddingParams {
  std::size_t m = 2;
  std::size_t d = 1;
  std::size_t theiler = 12;
  /// Neighbourhood radius in units of the standardized series.
  double eps = 0.3;
  std::size_t n_ref = 200;
  std::size_t steps = 12;
  std::size_t k_min = 4;
  std::uint64_t seed = 0;
  ReferenceSampling sampling = ReferenceSampling::even;
  /// 0 = hardware concurrency. Output does not depend on it.
  std::size_t threads = 1;
};

/// Kantz stretching curve S(0..steps-1).
struct DivergenceCurve {
  /// NaN where no reference contributed.
  std::vector<double> s_values;
  std::vector<std::size_t> ref_counts;
  EmbeddingParams params;
  std::size_t references_tried = 0;
  std::size_t references_accepted = 0;
};

/**
 * Largest-Lyapunov stretching curve by the Kantz procedure.
 *
 * The series is standardized first. For each reference i the neighbours are the
 * embedded points within max-norm distance eps, more than `theiler` samples away
 * and with `steps` future samples available. A reference with fewer than k_min
 * neighbours is discarded. At each Δ the contribution is ln of the mean scalar
 * distance |x_{i+(m-1)d+Δ} - x_{j+(m-1)d+Δ}| over neighbours with a non-zero
 * distance; S(Δ) averages contributions over references in index order.
 */
inline DivergenceCurve lyap_k(const TimeSeries& ts, const EmbeddingParams& p) {
  if (p.m < 1 || p.d < 1) throw ValidationError("embedding needs m >= 1 and d >= 1");
  if (p.steps < 2) throw ValidationError("steps must be at least 2");
  if (p.n_ref < 1 || p.k_min < 1) throw ValidationError("n_ref and k_min must be at least 1");
  if (!(p.eps > 0.0) || !std::isfinite(p.eps)) throw ValidationError("eps must be positive");
  const std::size_t offset = (p.m - 1) * p.d;
  if (offset + p.steps >= ts.size())
    throw ValidationError("series shorter than (m-1)·d + steps + 1 samples");

  const auto z_series = standardize(ts);
  const auto z = z_series.values();
  const std::size_t valid = ts.size() - offset - p.steps + 1;

  std::vector<std::size_t> refs;
  const std::size_t count = std::min(p.n_ref, valid);
  if (p.sampling == ReferenceSampling::even) {
    for (std::size_t k = 0; k < count; ++k) refs.push_back(k * valid / count);
  } else {
    std::vector<std::size_t> all(valid);
    std::iota(all.begin(), all.end(), std::size_t{0});
    Rng rng(p.seed);
    for (std::size_t k = 0; k < count; ++k) {
      const auto j = k + static_cast<std::size_t>(rng.below(valid - k));
      std::swap(all[k], all[j]);
    }
    refs.assign(all.begin(), all.begin() + static_cast<std::ptrdiff_t>(count));
    std::sort(refs.begin(), refs.end());
  }

  constexpr double kSkip = std::numeric_limits<double>::quiet_NaN();
  std::vector<std::vector<double>> contrib(refs.size());
  std::vector<std::size_t> neighbour_count(refs.size(), 0);

  parallel_for(refs.size(), p.threads, [&](std::size_t r) {
    const std::size_t i = refs[r];
    std::vector<std::size_t> nb;
    for (std::size_t j = 0; j < valid; ++j) {
      if ((i > j ? i - j : j - i) <= p.theiler) continue;
      double dist = 0.0;
      for (std::size_t c = 0; c < p.m && dist < p.eps; ++c)
        dist = std::max(dist, std::abs(z[i + c * p.d] - z[j + c * p.d]));
      if (dist < p.eps) nb.push_back(j);
    }
    neighbour_count[r] = nb.size();
    if (nb.size() < p.k_min) return;
    auto& out = contrib[r];
    out.assign(p.steps, kSkip);
    for (std::size_t delta = 0; delta < p.steps; ++delta) {
      double sum = 0.0;
      std::size_t used = 0;
      for (std::size_t j : nb) {
        const double dist = std::abs(z[i + offset + delta] - z[j + offset + delta]);
        if (dist == 0.0) continue;
        sum += dist;
        ++used;
      }
      if (used) out[delta] = std::log(sum / static_cast<double>(used));
    }
  });

  DivergenceCurve curve;
  curve.params = p;
  curve.references_tried = refs.size();
  curve.s_values.assign(p.steps, 0.0);
  curve.ref_counts.assign(p.steps, 0);
  for (const auto& c : contrib) {
    if (c.empty()) continue;
    ++curve.references_accepted;
    for (std::size_t delta = 0; delta < p.steps; ++delta) {
      if (std::isnan(c[delta])) continue;
      curve.s_values[delta] += c[delta];
      ++curve.ref_counts[delta];
    }
  }
  if (curve.references_accepted == 0) {
    const auto best = *std::max_element(neighbour_count.begin(), neighbour_count.end());
    throw NumericError("eps too small: no reference has k_min = " + std::to_string(p.k_min) +
                       " neighbours (largest neighbour count " + std::to_string(best) + ")");
  }
  for (std::size_t delta = 0; delta < p.steps; ++delta)
    curve.s_values[delta] = curve.ref_counts[delta]
                                ? curve.s_values[delta] / static_cast<double>(curve.ref_counts[delta])
                                : kSkip;
  return curve;
}

struct LyapunovFit {
  double lambda1 = 0.0;
  std::size_t fit_start = 0;
  std::size_t fit_end = 0;
  double r_squared = 0.0;
  double dt = 1.0;

  /// Positive slope with r² >= 0.8. A numeric label only.
  bool chaos_consistent() const { return lambda1 > 0.0 && r_squared >= 0.8; }
};

/// OLS slope of S(Δ) over Δ in [start, end], per unit time.
inline LyapunovFit lyap_fit(const DivergenceCurve& curve, std::size_t start, std::size_t end, double dt = 1.0) {
  if (!(dt > 0.0) || !std::isfinite(dt)) throw ValidationError("dt must be positive");
  if (end >= curve.s_values.size() || start >= end)
    throw ValidationError("fit range must satisfy 0 <= start < end < steps");
  if (end - start + 1 < 3) throw ValidationError("fit range needs at least 3 points");
  std::vector<double> xs, ys;
  for (std::size_t k = start; k <= end; ++k) {
    if (curve.ref_counts[k] == 0) throw ValidationError("no references contribute at step " + std::to_string(k));
    xs.push_back(static_cast<double>(k));
    ys.push_back(curve.s_values[k]);
  }
  const auto f = fit_line(xs, ys);
  return {f.slope / dt, start, end, f.r_squared, dt};
}

}  // namespace lrm
