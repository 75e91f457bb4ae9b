#pragma once

// Reference computations used only by tests. They follow the textbook
// definitions directly and share no code with the library paths they check.

#include <cmath>
#include <span>
#include <vector>

namespace lrm::oracle {

/// Rescaled range via explicit mean-removed cumulative sums (population-free form).
inline double rescaled_range(std::span<const double> x) {
  const std::size_t n = x.size();
  double m = 0.0;
  for (double v : x) m += v;
  m /= static_cast<double>(n);
  std::vector<double> cum(n + 1, 0.0);
  for (std::size_t k = 0; k < n; ++k) cum[k + 1] = cum[k] + (x[k] - m);
  double lo = cum[1], hi = cum[1], ss = 0.0;
  for (std::size_t k = 1; k <= n; ++k) {
    lo = std::min(lo, cum[k]);
    hi = std::max(hi, cum[k]);
  }
  for (double v : x) ss += (v - m) * (v - m);
  return (hi - lo) / std::sqrt(ss / static_cast<double>(n - 1));
}

/// Dense lower Cholesky factor of a symmetric positive definite matrix.
inline std::vector<std::vector<double>> cholesky(const std::vector<std::vector<double>>& a) {
  const std::size_t n = a.size();
  std::vector<std::vector<double>> l(n, std::vector<double>(n, 0.0));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j <= i; ++j) {
      double s = a[i][j];
      for (std::size_t k = 0; k < j; ++k) s -= l[i][k] * l[j][k];
      l[i][j] = i == j ? std::sqrt(s) : s / l[j][j];
    }
  return l;
}

/// Sample autocovariance at lag k with divisor n, about the sample mean.
inline double autocovariance(std::span<const double> x, std::size_t k) {
  const std::size_t n = x.size();
  double m = 0.0;
  for (double v : x) m += v;
  m /= static_cast<double>(n);
  double s = 0.0;
  for (std::size_t t = 0; t + k < n; ++t) s += (x[t] - m) * (x[t + k] - m);
  return s / static_cast<double>(n);
}

}  // namespace lrm::oracle
