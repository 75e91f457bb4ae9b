#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <numbers>
#include <vector>

#include "lrm/acf.hpp"
#include "lrm/synth.hpp"
#include "oracles.hpp"

namespace lrm::synth {
namespace {

TEST(Generate, DeterministicPerSeed) {
  for (Kind k : {Kind::white, Kind::walk, Kind::fgn, Kind::ar1}) {
    GenSpec s{k, 256, 5, 0.7, 0.4};
    const auto a = generate(s), b = generate(s);
    EXPECT_TRUE(std::equal(a.values().begin(), a.values().end(), b.values().begin()));
    s.seed = 6;
    const auto c = generate(s);
    EXPECT_FALSE(std::equal(a.values().begin(), a.values().end(), c.values().begin())) << to_string(k);
  }
}

TEST(Generate, PinnedWhiteNoiseStream) {
  // Frozen from this generator chain; a change here breaks reproducibility of published runs.
  const auto w = generate({Kind::white, 3, 7});
  const auto again = generate({Kind::white, 3, 7});
  EXPECT_EQ(w[0], again[0]);
  Rng rng(7);
  EXPECT_EQ(w[0], rng.normal());
  EXPECT_EQ(w[1], rng.normal());
}

TEST(Generate, LogisticIterates) {
  const auto x = generate({.kind = Kind::logistic, .n = 4, .r = 4.0, .x0 = 0.2});
  EXPECT_EQ(x[0], 0.2);
  EXPECT_NEAR(x[1], 0.64, 1e-15);
  EXPECT_NEAR(x[2], 0.9216, 1e-15);
  EXPECT_NEAR(x[3], 0.28901376, 1e-14);
}

TEST(Generate, LogisticStaysInUnitInterval) {
  for (double r : {0.5, 2.0, 3.2, 3.7, 4.0}) {
    const auto x = generate({.kind = Kind::logistic, .n = 5000, .r = r, .x0 = 0.37});
    for (double v : x.values()) {
      ASSERT_GE(v, 0.0);
      ASSERT_LE(v, 1.0);
    }
  }
}

TEST(Generate, WalkDifferencesAreWhite) {
  const auto w = generate({Kind::white, 4096, 21});
  const auto b = generate({Kind::walk, 4096, 21});
  EXPECT_EQ(b[0], w[0]);
  // Floating-point cumulative sums do not difference back bit-exactly; allow a few ulps of the level.
  for (std::size_t i = 1; i < w.size(); ++i)
    EXPECT_NEAR(b[i] - b[i - 1], w[i], 4.0 * std::numeric_limits<double>::epsilon() * (std::abs(b[i]) + 1.0));
}

TEST(Generate, SineValues) {
  const auto s = generate({.kind = Kind::sine, .n = 60, .period = 50.0});
  EXPECT_EQ(s[0], 0.0);
  EXPECT_NEAR(s[12], std::sin(2.0 * std::numbers::pi * 12.0 / 50.0), 1e-15);
  EXPECT_NEAR(s[50], 0.0, 1e-13);
}

TEST(Generate, Ar1LagOneAutocorrelation) {
  const auto x = generate({.kind = Kind::ar1, .n = 10000, .seed = 3, .phi = 0.5});
  EXPECT_NEAR(acf_direct(x, 1)[1], 0.5, 0.03);
}

TEST(Generate, Validation) {
  EXPECT_THROW(generate({Kind::white, 1, 1}), ValidationError);
  EXPECT_THROW(generate({.kind = Kind::fgn, .n = 4097, .hurst = 0.7}), ValidationError);
  EXPECT_THROW(generate({.kind = Kind::fgn, .n = 100, .hurst = 1.0}), ValidationError);
  EXPECT_THROW(generate({.kind = Kind::ar1, .n = 100, .phi = 1.0}), ValidationError);
  EXPECT_THROW(generate({.kind = Kind::logistic, .n = 100, .r = 4.5}), ValidationError);
  EXPECT_THROW(generate({.kind = Kind::logistic, .n = 100, .x0 = 1.0}), ValidationError);
  EXPECT_THROW(generate({.kind = Kind::sine, .n = 100, .period = 0.0}), ValidationError);
  EXPECT_THROW(generate({.kind = Kind::ar1, .n = 100, .phi = NAN}), ValidationError);
  EXPECT_THROW(kind_from_string("lorenz"), ValidationError);
  EXPECT_NO_THROW(generate({.kind = Kind::fgn, .n = 4096, .hurst = 0.7}));
}

TEST(Fgn, HalfIsWhiteCovariance) {
  EXPECT_EQ(fgn_autocovariance(0.5, 0), 1.0);
  for (std::size_t k = 1; k < 50; ++k) EXPECT_NEAR(fgn_autocovariance(0.5, k), 0.0, 1e-15);
}

TEST(Fgn, MatchesDenseCholeskyOracle) {
  const std::size_t n = 64;
  for (double h : {0.2, 0.5, 0.85}) {
    std::vector<std::vector<double>> cov(n, std::vector<double>(n));
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) cov[i][j] = fgn_autocovariance(h, i > j ? i - j : j - i);
    const auto l = oracle::cholesky(cov);
    Rng rng(31);
    std::vector<double> z(n);
    for (auto& v : z) v = rng.normal();
    const auto x = generate({.kind = Kind::fgn, .n = n, .seed = 31, .hurst = h});
    for (std::size_t i = 0; i < n; ++i) {
      double expect = 0.0;
      for (std::size_t j = 0; j <= i; ++j) expect += l[i][j] * z[j];
      ASSERT_NEAR(x[i], expect, 1e-10) << "H=" << h << " i=" << i;
    }
  }
}

TEST(Fgn, SampleAutocovarianceMatchesTheory) {
  const double h = 0.8;
  const std::size_t n = 2048, seeds = 20;
  for (std::size_t k = 0; k <= 5; ++k) {
    std::vector<double> est;
    for (std::uint64_t s = 1; s <= seeds; ++s) {
      const auto x = generate({.kind = Kind::fgn, .n = n, .seed = s, .hurst = h});
      est.push_back(oracle::autocovariance(x.values(), k));
    }
    double m = 0.0, v = 0.0;
    for (double e : est) m += e;
    m /= seeds;
    for (double e : est) v += (e - m) * (e - m);
    v /= seeds - 1;
    // The mean-corrected estimator is biased low under long memory; judge against its spread.
    EXPECT_NEAR(m, fgn_autocovariance(h, k), 5.0 * std::sqrt(v)) << "lag " << k;
  }
}

}  // namespace
}  // namespace lrm::synth
