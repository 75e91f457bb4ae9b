#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "lrm/chaos.hpp"
#include "lrm/synth.hpp"

namespace lrm {
namespace {

TimeSeries logistic(std::size_t n) {
  return synth::generate({.kind = synth::Kind::logistic, .n = n, .r = 4.0, .x0 = 0.2});
}

EmbeddingParams logistic_params() {
  EmbeddingParams p;
  p.m = 1;
  p.d = 1;
  p.theiler = 10;
  p.eps = 1e-3;
  p.steps = 8;
  p.n_ref = 5000;
  p.k_min = 1;
  return p;
}

TEST(Embed, Examples) {
  const std::vector<double> x{1, 2, 3, 4};
  EXPECT_EQ(embed(x, 2, 1), (std::vector<std::vector<double>>{{1, 2}, {2, 3}, {3, 4}}));
  EXPECT_EQ(embed(x, 1, 1), (std::vector<std::vector<double>>{{1}, {2}, {3}, {4}}));
  const std::vector<double> y{1, 2, 3, 4, 5, 6};
  EXPECT_EQ(embed(y, 3, 2), (std::vector<std::vector<double>>{{1, 3, 5}, {2, 4, 6}}));
  EXPECT_THROW(embed(y, 4, 2), ValidationError);
  EXPECT_THROW(embed(y, 0, 1), ValidationError);
}

TEST(LyapK, LogisticSlopeIsLnTwo) {
  const auto c = lyap_k(logistic(5000), logistic_params());
  const auto f = lyap_fit(c, 0, 4, 1.0);
  EXPECT_NEAR(f.lambda1, std::numbers::ln2, 0.05);
  EXPECT_TRUE(f.chaos_consistent());
}

TEST(LyapK, SineHasNoDivergence) {
  EmbeddingParams p;
  p.m = 2;
  p.d = 12;
  // 200 evenly spaced references alias against the 50-sample period and miss part of the phase circle.
  p.n_ref = 1000;
  const auto sine = synth::generate({.kind = synth::Kind::sine, .n = 5000, .period = 50.0});
  const auto f = lyap_fit(lyap_k(sine, p), 1, 6);
  EXPECT_NEAR(f.lambda1, 0.0, 0.02);
  EXPECT_FALSE(f.chaos_consistent());
}

TEST(LyapK, ConstantSeriesFails) {
  EXPECT_THROW(lyap_k(TimeSeries(std::vector<double>(100, 1.0)), EmbeddingParams{}), NumericError);
}

TEST(LyapK, EpsTooSmallCarriesNeighbourCount) {
  auto p = logistic_params();
  p.eps = 1e-12;
  p.k_min = 3;
  try {
    lyap_k(logistic(2000), p);
    FAIL();
  } catch (const NumericError& e) {
    EXPECT_NE(std::string(e.what()).find("largest neighbour count"), std::string::npos);
  }
}

TEST(LyapK, TooShort) {
  EmbeddingParams p;
  p.m = 3;
  p.d = 5;
  p.steps = 10;
  EXPECT_THROW(lyap_k(synth::generate({synth::Kind::white, 20, 1}), p), ValidationError);
}

TEST(LyapK, RefCountsNonIncreasingOnContinuousData) {
  const auto c = lyap_k(synth::generate({synth::Kind::ar1, 3000, 8, 0.5, 0.9}), EmbeddingParams{});
  for (std::size_t k = 1; k < c.ref_counts.size(); ++k) EXPECT_LE(c.ref_counts[k], c.ref_counts[k - 1]);
  for (std::size_t k = 0; k < c.s_values.size(); ++k)
    if (c.ref_counts[k] > 0) {
      EXPECT_TRUE(std::isfinite(c.s_values[k]));
    }
}

TEST(LyapK, ParallelMatchesSequentialBitExactly) {
  auto p = logistic_params();
  p.n_ref = 800;
  p.sampling = ReferenceSampling::random;
  p.seed = 99;
  const auto ts = logistic(4000);
  p.threads = 1;
  const auto a = lyap_k(ts, p);
  p.threads = 4;
  const auto b = lyap_k(ts, p);
  EXPECT_EQ(a.ref_counts, b.ref_counts);
  for (std::size_t k = 0; k < a.s_values.size(); ++k) EXPECT_EQ(a.s_values[k], b.s_values[k]);
}

TEST(LyapK, RandomSamplingDependsOnSeed) {
  auto p = logistic_params();
  p.n_ref = 300;
  p.sampling = ReferenceSampling::random;
  p.seed = 1;
  const auto a = lyap_k(logistic(3000), p);
  p.seed = 2;
  const auto b = lyap_k(logistic(3000), p);
  EXPECT_NE(a.s_values, b.s_values);
}

TEST(LyapK, ShiftAndScaleInvariance) {
  const auto base = synth::generate({synth::Kind::ar1, 2000, 5, 0.5, 0.7});
  std::vector<double> shifted, scaled;
  for (double v : base.values()) {
    shifted.push_back(v + 1000.0);
    scaled.push_back(37.0 * v);
  }
  const EmbeddingParams p;
  const auto a = lyap_k(base, p);
  const auto b = lyap_k(TimeSeries(shifted), p);
  const auto c = lyap_k(TimeSeries(scaled), p);
  EXPECT_EQ(a.ref_counts, b.ref_counts);
  EXPECT_EQ(a.ref_counts, c.ref_counts);
  for (std::size_t k = 0; k < a.s_values.size(); ++k) {
    EXPECT_NEAR(a.s_values[k], b.s_values[k], 1e-10);
    EXPECT_NEAR(a.s_values[k], c.s_values[k], 1e-10);
  }
}

TEST(LyapK, QuantizedDataDropsZeroDistances) {
  std::vector<double> v;
  Rng rng(12);
  for (int i = 0; i < 1500; ++i) v.push_back(std::round(rng.normal() * 3.0) / 3.0);
  const auto c = lyap_k(TimeSeries(v), EmbeddingParams{});
  for (std::size_t k = 0; k < c.s_values.size(); ++k)
    if (c.ref_counts[k] > 0) {
      EXPECT_TRUE(std::isfinite(c.s_values[k]));
    }
}

TEST(LyapFit, ExactLine) {
  DivergenceCurve c;
  for (int k = 0; k < 10; ++k) {
    c.s_values.push_back(0.4 * k - 3.0);
    c.ref_counts.push_back(50);
  }
  const auto f = lyap_fit(c, 0, 9, 1.0);
  EXPECT_NEAR(f.lambda1, 0.4, 1e-12);
  EXPECT_NEAR(f.r_squared, 1.0, 1e-12);
  EXPECT_NEAR(lyap_fit(c, 2, 6, 0.5).lambda1, 0.8, 1e-12);
}

TEST(LyapFit, Errors) {
  DivergenceCurve c{{0, 1, 2, 3}, {5, 5, 0, 5}, {}, 5, 5};
  EXPECT_THROW(lyap_fit(c, 0, 1, 1.0), ValidationError);
  EXPECT_THROW(lyap_fit(c, 0, 4, 1.0), ValidationError);
  EXPECT_THROW(lyap_fit(c, 0, 3, 1.0), ValidationError);  // step 2 has no references
  EXPECT_THROW(lyap_fit(c, 0, 1, 0.0), ValidationError);
}

}  // namespace
}  // namespace lrm
