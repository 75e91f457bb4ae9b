#pragma once

#include <complex>
#include <cstddef>
#include <optional>
#include <vector>

#include "lrm/error.hpp"
#include "lrm/fft.hpp"
#include "lrm/stats.hpp"
#include "lrm/time_series.hpp"

namespace lrm {

/// Biased sample autocorrelation r_0..r_max_lag of a length-n series.
struct AcfResult {
  std::size_t max_lag = 0;
  std::vector<double> coefficients;
  std::size_t n = 0;

  double operator[](std::size_t k) const { return coefficients.at(k); }
};

namespace detail {

inline std::vector<double> demeaned_checked(const TimeSeries& ts, std::size_t max_lag) {
  if (max_lag < 1 || max_lag >= ts.size())
    throw ValidationError("max_lag must satisfy 1 <= max_lag < n (n = " + std::to_string(ts.size()) + ")");
  const auto x = ts.values();
  const double m = mean(x);
  std::vector<double> d(x.size());
  double ss = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    d[i] = x[i] - m;
    ss += d[i] * d[i];
  }
  if (!(ss > 0.0)) throw NumericError("autocorrelation of a constant series is undefined");
  return d;
}

}  // namespace detail

/// r_k = sum_{t<n-k} d_t d_{t+k} / sum_t d_t^2, d = x - mean(x).
inline AcfResult acf_direct(const TimeSeries& ts, std::size_t max_lag) {
  const auto d = detail::demeaned_checked(ts, max_lag);
  const std::size_t n = d.size();
  std::vector<double> c(max_lag + 1);
  for (std::size_t k = 0; k <= max_lag; ++k) {
    double s = 0.0;
    for (std::size_t t = 0; t + k < n; ++t) s += d[t] * d[t + k];
    c[k] = s;
  }
  const double c0 = c[0];
  for (auto& v : c) v /= c0;
  c[0] = 1.0;
  return {max_lag, std::move(c), n};
}

/// Same contract as acf_direct via the power spectrum of the zero-padded series.
inline AcfResult acf_fft(const TimeSeries& ts, std::size_t max_lag) {
  const auto d = detail::demeaned_checked(ts, max_lag);
  const std::size_t n = d.size();
  const std::size_t size = fft::next_pow2(2 * n);
  std::vector<std::complex<double>> buf(size);
  for (std::size_t i = 0; i < n; ++i) buf[i] = d[i];
  fft::transform(buf, false);
  for (auto& z : buf) z = std::norm(z);
  fft::transform(buf, true);
  std::vector<double> c(max_lag + 1);
  const double c0 = buf[0].real();
  for (std::size_t k = 0; k <= max_lag; ++k) c[k] = buf[k].real() / c0;
  c[0] = 1.0;
  return {max_lag, std::move(c), n};
}

/// Smallest lag k >= 1 with r_k <= 0.
inline std::optional<std::size_t> first_zero_crossing(const AcfResult& acf) {
  for (std::size_t k = 1; k < acf.coefficients.size(); ++k)
    if (acf.coefficients[k] <= 0.0) return k;
  return std::nullopt;
}

/// Mean of r_lo..r_hi inclusive.
inline double band_mean(const AcfResult& acf, std::size_t lo, std::size_t hi) {
  if (lo < 1 || lo > hi || hi > acf.max_lag)
    throw ValidationError("band must satisfy 1 <= lo <= hi <= max_lag");
  double s = 0.0;
  for (std::size_t k = lo; k <= hi; ++k) s += acf.coefficients[k];
  return s / static_cast<double>(hi - lo + 1);
}

}  // namespace lrm
