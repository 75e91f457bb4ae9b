#pragma once

#include <algorithm>
#include <cmath>
#include <span>
#include <vector>

#include "lrm/error.hpp"

namespace lrm {

struct LinearFit {
  double slope = 0.0;
  double intercept = 0.0;
  double slope_std_err = 0.0;
  /// 1 - SSE/SSM, both taken with the fit weights.
  double r_squared = 0.0;
  std::size_t points = 0;
};

/// Weighted least squares line y = a + b·x. Empty `w` means unit weights.
inline LinearFit fit_line(std::span<const double> x, std::span<const double> y,
                          std::span<const double> w = {}) {
  const std::size_t n = x.size();
  if (y.size() != n || (!w.empty() && w.size() != n))
    throw ValidationError("regression inputs must have equal lengths");
  if (n < 2) throw ValidationError("regression needs at least 2 points");
  auto weight = [&](std::size_t i) { return w.empty() ? 1.0 : w[i]; };

  double sw = 0.0, sx = 0.0, sy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double wi = weight(i);
    if (!(wi > 0.0) || !std::isfinite(wi)) throw ValidationError("regression weights must be positive and finite");
    sw += wi;
    sx += wi * x[i];
    sy += wi * y[i];
  }
  const double mx = sx / sw, my = sy / sw;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double wi = weight(i), dx = x[i] - mx, dy = y[i] - my;
    sxx += wi * dx * dx;
    sxy += wi * dx * dy;
    syy += wi * dy * dy;
  }
  if (!(sxx > 0.0)) throw ValidationError("regression abscissae are all identical");

  LinearFit f;
  f.points = n;
  f.slope = sxy / sxx;
  f.intercept = my - f.slope * mx;
  double sse = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double r = y[i] - (f.intercept + f.slope * x[i]);
    sse += weight(i) * r * r;
  }
  f.r_squared = syy > 0.0 ? std::max(0.0, 1.0 - sse / syy) : 1.0;
  // Unit weights give the usual OLS standard error; weighted fits scale by the
  // residual variance so the weights only need to be relative.
  f.slope_std_err = n > 2 ? std::sqrt(sse / static_cast<double>(n - 2) / sxx) : 0.0;
  return f;
}

}  // namespace lrm
