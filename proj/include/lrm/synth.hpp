#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <string>
#include <string_view>
#include <vector>

#include "lrm/error.hpp"
#include "lrm/random.hpp"
#include "lrm/time_series.hpp"

namespace lrm::synth {

enum class Kind { white, walk, fgn, ar1, logistic, sine };

inline constexpr std::size_t kMaxExactFgn = 4096;

inline std::string_view to_string(Kind k) {
  switch (k) {
    case Kind::white: return "white";
    case Kind::walk: return "walk";
    case Kind::fgn: return "fgn";
    case Kind::ar1: return "ar1";
    case Kind::logistic: return "logistic";
    case Kind::sine: return "sine";
  }
  return "?";
}

inline Kind kind_from_string(std::string_view s) {
  for (Kind k : {Kind::white, Kind::walk, Kind::fgn, Kind::ar1, Kind::logistic, Kind::sine})
    if (to_string(k) == s) return k;
  throw ValidationError("unknown generator kind '" + std::string(s) + "'");
}

struct GenSpec {
  Kind kind = Kind::white;
  std::size_t n = 0;
  std::uint64_t seed = 0;
  double hurst = 0.5;   // fgn
  double phi = 0.0;     // ar1
  double r = 4.0;       // logistic
  double x0 = 0.2;      // logistic
  double period = 50.0; // sine
};

/// Autocovariance of unit-variance fractional Gaussian noise at lag k.
inline double fgn_autocovariance(double hurst, std::size_t k) {
  const double h2 = 2.0 * hurst;
  const double kd = static_cast<double>(k);
  const double below = k == 0 ? 1.0 : std::pow(kd - 1.0, h2);
  return 0.5 * (std::pow(kd + 1.0, h2) - 2.0 * std::pow(kd, h2) + below);
}

namespace detail {

inline std::vector<double> white(std::size_t n, Rng& rng) {
  std::vector<double> x(n);
  for (auto& v : x) v = rng.normal();
  return x;
}

// Durbin–Levinson recursion: x_t = E[x_t | x_0..x_{t-1}] + sqrt(v_t)·z_t.
// This is the Cholesky factor of the Toeplitz covariance applied row by row.
inline std::vector<double> fgn(std::size_t n, double hurst, Rng& rng) {
  std::vector<double> gamma(n);
  for (std::size_t k = 0; k < n; ++k) gamma[k] = fgn_autocovariance(hurst, k);
  const auto z = white(n, rng);

  std::vector<double> x(n), phi(n, 0.0), prev(n, 0.0);
  double v = gamma[0];
  x[0] = std::sqrt(v) * z[0];
  for (std::size_t t = 1; t < n; ++t) {
    double acc = gamma[t];
    for (std::size_t j = 1; j < t; ++j) acc -= prev[j] * gamma[t - j];
    const double ptt = acc / v;
    phi[t] = ptt;
    for (std::size_t j = 1; j < t; ++j) phi[j] = prev[j] - ptt * prev[t - j];
    v *= (1.0 - ptt * ptt);
    double m = 0.0;
    for (std::size_t j = 1; j <= t; ++j) m += phi[j] * x[t - j];
    x[t] = m + std::sqrt(v) * z[t];
    std::copy(phi.begin(), phi.begin() + static_cast<std::ptrdiff_t>(t) + 1, prev.begin());
  }
  return x;
}

}  // namespace detail

inline void validate(const GenSpec& s) {
  if (s.n < 2) throw ValidationError("generator length must be at least 2");
  for (double p : {s.hurst, s.phi, s.r, s.x0, s.period})
    if (!std::isfinite(p)) throw ValidationError("generator parameters must be finite");
  switch (s.kind) {
    case Kind::fgn:
      if (!(s.hurst > 0.0 && s.hurst < 1.0)) throw ValidationError("fgn needs 0 < H < 1");
      if (s.n > kMaxExactFgn)
        throw ValidationError("exact fgn is limited to n <= " + std::to_string(kMaxExactFgn) +
                              "; generate shorter chunks");
      break;
    case Kind::ar1:
      if (!(std::abs(s.phi) < 1.0)) throw ValidationError("ar1 needs |phi| < 1");
      break;
    case Kind::logistic:
      if (!(s.r > 0.0 && s.r <= 4.0)) throw ValidationError("logistic needs 0 < r <= 4");
      if (!(s.x0 > 0.0 && s.x0 < 1.0)) throw ValidationError("logistic needs 0 < x0 < 1");
      break;
    case Kind::sine:
      if (!(s.period > 0.0)) throw ValidationError("sine needs period > 0");
      break;
    default: break;
  }
}

/// Deterministic series for (kind, n, seed, params). Logistic starts at x0; sine at phase 0.
inline TimeSeries generate(const GenSpec& spec) {
  validate(spec);
  Rng rng(spec.seed);
  const std::size_t n = spec.n;
  std::vector<double> x;
  switch (spec.kind) {
    case Kind::white: x = detail::white(n, rng); break;
    case Kind::walk: {
      x = detail::white(n, rng);
      for (std::size_t i = 1; i < n; ++i) x[i] += x[i - 1];
      break;
    }
    case Kind::fgn: x = detail::fgn(n, spec.hurst, rng); break;
    case Kind::ar1: {
      const auto e = detail::white(n, rng);
      x.resize(n);
      x[0] = e[0] / std::sqrt(1.0 - spec.phi * spec.phi);
      for (std::size_t i = 1; i < n; ++i) x[i] = spec.phi * x[i - 1] + e[i];
      break;
    }
    case Kind::logistic: {
      x.resize(n);
      x[0] = spec.x0;
      for (std::size_t i = 1; i < n; ++i) x[i] = spec.r * x[i - 1] * (1.0 - x[i - 1]);
      break;
    }
    case Kind::sine: {
      x.resize(n);
      for (std::size_t i = 0; i < n; ++i)
        x[i] = std::sin(2.0 * std::numbers::pi * static_cast<double>(i) / spec.period);
      break;
    }
  }
  return TimeSeries(std::move(x), std::nullopt, 1, std::string(to_string(spec.kind)));
}

}  // namespace lrm::synth
