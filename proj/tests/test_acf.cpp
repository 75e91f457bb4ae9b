#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "lrm/acf.hpp"
#include "lrm/synth.hpp"

namespace lrm {
namespace {

TimeSeries white(std::size_t n, std::uint64_t seed) {
  return synth::generate({synth::Kind::white, n, seed});
}

TEST(AcfDirect, AlternatingClosedForm) {
  std::vector<double> v(100);
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = i % 2 ? -1.0 : 1.0;
  const auto a = acf_direct(TimeSeries(v), 5);
  EXPECT_EQ(a[0], 1.0);
  EXPECT_NEAR(a[1], -0.99, 1e-15);
  EXPECT_NEAR(a[2], 0.98, 1e-15);
  EXPECT_EQ(first_zero_crossing(a), 1u);
}

TEST(AcfDirect, Ar1LagOne) {
  const auto ts = synth::generate({.kind = synth::Kind::ar1, .n = 10000, .seed = 42, .phi = 0.5});
  EXPECT_NEAR(acf_direct(ts, 1)[1], 0.5, 0.03);
}

TEST(AcfDirect, Preconditions) {
  EXPECT_THROW(acf_direct(TimeSeries({1, 1, 1}), 1), NumericError);
  EXPECT_THROW(acf_direct(TimeSeries({1, 2, 3}), 3), ValidationError);
  EXPECT_THROW(acf_direct(TimeSeries({1, 2, 3}), 0), ValidationError);
  EXPECT_THROW(acf_fft(TimeSeries({1, 1, 1}), 1), NumericError);
}

TEST(AcfFft, MatchesDirectOnTinySeries) {
  const TimeSeries ts({1, 2, 3, 4});
  const auto d = acf_direct(ts, 3), f = acf_fft(ts, 3);
  for (std::size_t k = 0; k <= 3; ++k) EXPECT_NEAR(f[k], d[k], 1e-12);
  EXPECT_EQ(f[0], 1.0);
}

TEST(AcfFft, MatchesDirectOracle) {
  for (std::size_t n : {17u, 64u, 255u, 777u})
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
      const auto ts = white(n, seed);
      const auto d = acf_direct(ts, n - 1), f = acf_fft(ts, n - 1);
      for (std::size_t k = 0; k < n; ++k) ASSERT_NEAR(f[k], d[k], 1e-10) << "n=" << n << " k=" << k;
    }
}

TEST(Acf, BoundedByOne) {
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const auto a = acf_fft(synth::generate({.kind = synth::Kind::walk, .n = 500, .seed = seed}), 499);
    for (double r : a.coefficients) EXPECT_LE(std::abs(r), 1.0 + 1e-12);
  }
}

TEST(Acf, AffineInvariance) {
  const auto ts = white(300, 9);
  std::vector<double> y;
  for (double v : ts.values()) y.push_back(-3.5 * v + 12.0);
  const auto a = acf_direct(ts, 40), b = acf_direct(TimeSeries(y), 40);
  for (std::size_t k = 0; k <= 40; ++k) EXPECT_NEAR(a[k], b[k], 1e-10);
}

TEST(Acf, WhiteNoiseSmall) {
  const double bound = 4.0 / std::sqrt(4096.0);
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const auto a = acf_fft(white(4096, seed), 20);
    for (std::size_t k = 1; k <= 20; ++k) EXPECT_LE(std::abs(a[k]), bound) << "seed " << seed;
  }
}

TEST(ZeroCrossing, TrendHasNone) {
  std::vector<double> v;
  for (int i = 0; i < 50; ++i) v.push_back(i);
  EXPECT_FALSE(first_zero_crossing(acf_direct(TimeSeries(v), 10)));
}

TEST(ZeroCrossing, TouchingZeroCounts) {
  AcfResult a{3, {1.0, 0.5, 0.0, -0.2}, 10};
  EXPECT_EQ(first_zero_crossing(a), 2u);
}

TEST(BandMean, RangeAndSingleLag) {
  AcfResult a{4, {1.0, 0.5, 0.25, 0.125, 0.0}, 10};
  EXPECT_EQ(band_mean(a, 2, 2), 0.25);
  EXPECT_DOUBLE_EQ(band_mean(a, 1, 4), 0.875 / 4.0);
  EXPECT_THROW(band_mean(a, 0, 2), ValidationError);
  EXPECT_THROW(band_mean(a, 3, 2), ValidationError);
  EXPECT_THROW(band_mean(a, 1, 5), ValidationError);
}

}  // namespace
}  // namespace lrm
