#include <gtest/gtest.h>

#include <cmath>
#include <map>
#include <vector>

#include "lrm/permtest.hpp"
#include "lrm/synth.hpp"

namespace lrm {
namespace {

std::vector<double> gaussian(std::size_t n, std::uint64_t seed) {
  const auto ts = synth::generate({synth::Kind::white, n, seed});
  return {ts.values().begin(), ts.values().end()};
}

TEST(Pearson, Examples) {
  const std::vector<double> p{1, 2, 3}, j{1, 2, 4};
  EXPECT_NEAR(pearson(p, j), 3.0 / std::sqrt(2.0 * 42.0 / 9.0), 1e-15);
  EXPECT_NEAR(pearson(p, j), 0.9820, 1e-4);
  EXPECT_DOUBLE_EQ(pearson(p, p), 1.0);
  const std::vector<double> neg{-1, -2, -3};
  EXPECT_DOUBLE_EQ(pearson(p, neg), -1.0);
}

TEST(Pearson, Errors) {
  const std::vector<double> c{2, 2, 2}, p{1, 2, 3}, short_v{1, 2};
  EXPECT_THROW(pearson(c, p), NumericError);
  EXPECT_THROW(pearson(p, short_v), ValidationError);
  EXPECT_THROW(pearson(short_v, short_v), ValidationError);
}

TEST(Resultant, Elementwise) {
  const std::vector<double> u{3, 0, -5}, v{4, 2, 12};
  EXPECT_EQ(resultant(u, v), (std::vector<double>{5, 2, 13}));
}

TEST(OrderPosition, PaperPositions) {
  EXPECT_EQ(order_position(0.05, 10000), 500u);
  EXPECT_EQ(order_position(0.95, 10000), 9500u);
  EXPECT_EQ(order_position(0.0, 10000), 1u);
  EXPECT_EQ(order_position(1.0, 10000), 10000u);
}

TEST(PermTest, CriticalValuesForIndependentSeries) {
  const auto p = gaussian(587, 101), j = gaussian(587, 202);
  const auto r = perm_test(p, j, 10000, 7, Tail::lower, 0);
  EXPECT_EQ(r.pos_lower, 500u);
  EXPECT_EQ(r.pos_upper, 9500u);
  EXPECT_EQ(r.r_crit_lower, r.sorted[499]);
  EXPECT_EQ(r.r_crit_upper, r.sorted[9499]);
  EXPECT_NEAR(r.r_crit_upper, 0.068, 0.008);
  EXPECT_NEAR(r.r_crit_lower, -0.068, 0.008);
  EXPECT_LE(r.r_crit_lower, r.median());
  EXPECT_LE(r.median(), r.r_crit_upper);
  for (double v : r.sorted) EXPECT_LE(std::abs(v), 1.0);
  for (double pv : {r.p_lower, r.p_upper, r.p_two_sided}) {
    EXPECT_GT(pv, 0.0);
    EXPECT_LE(pv, 1.0);
  }
}

TEST(PermTest, StrongCorrelationRejects) {
  const auto p = gaussian(100, 1);
  auto noise = gaussian(100, 2);
  std::vector<double> j;
  for (std::size_t i = 0; i < p.size(); ++i) j.push_back(p[i] + 0.45 * noise[i]);
  const auto r = perm_test(p, j, 2000, 3, Tail::upper);
  EXPECT_GT(r.r_obs, 0.85);
  EXPECT_GT(r.r_obs, r.r_crit_upper);
  EXPECT_TRUE(r.reject_5pct);
  EXPECT_NEAR(r.p_upper, 1.0 / 2001.0, 1e-15);
}

TEST(PermTest, Errors) {
  const std::vector<double> c(50, 1.0);
  const auto g = gaussian(50, 4);
  EXPECT_THROW(perm_test(c, g, 1000, 1, Tail::two), NumericError);
  EXPECT_THROW(perm_test(g, g, 99, 1, Tail::two), ValidationError);
}

TEST(PermTest, ParallelMatchesSequentialBitExactly) {
  const auto p = gaussian(300, 5), j = gaussian(300, 6);
  const auto a = perm_test(p, j, 3000, 42, Tail::two, 1);
  const auto b = perm_test(p, j, 3000, 42, Tail::two, 6);
  EXPECT_EQ(a.sorted, b.sorted);
  EXPECT_EQ(a.p_two_sided, b.p_two_sided);
  const auto c = perm_test(p, j, 3000, 43, Tail::two, 1);
  EXPECT_NE(a.sorted, c.sorted);
}

TEST(PermTest, RelabelingLeavesDistributionUnchanged) {
  const auto p = gaussian(400, 8), j = gaussian(400, 9);
  const auto a = perm_test(p, j, 5000, 1, Tail::two);
  const auto b = perm_test(j, p, 5000, 2, Tail::two);
  EXPECT_DOUBLE_EQ(a.r_obs, b.r_obs);
  for (std::size_t q = 1; q + 1 < a.summary.size(); ++q) EXPECT_NEAR(a.summary[q], b.summary[q], 0.01) << q;
}

TEST(PermTest, SmallCountsUseCeilFloorRule) {
  const auto p = gaussian(40, 10), j = gaussian(40, 11);
  const auto r = perm_test(p, j, 130, 1, Tail::two);
  EXPECT_EQ(r.pos_lower, 7u);    // ceil(6.5)
  EXPECT_EQ(r.pos_upper, 123u);  // floor(123.5)
}

TEST(Shuffle, AllPermutationsOfThreeEquallyLikely) {
  std::map<std::vector<int>, int> seen;
  const int draws = 60000;
  for (int k = 0; k < draws; ++k) {
    std::vector<int> v{0, 1, 2};
    auto rng = Rng::substream(77, static_cast<std::uint64_t>(k));
    shuffle(std::span<int>(v), rng);
    ++seen[v];
  }
  ASSERT_EQ(seen.size(), 6u);
  for (const auto& [perm, count] : seen) EXPECT_NEAR(count, draws / 6.0, 5.0 * std::sqrt(draws / 6.0));
}

}  // namespace
}  // namespace lrm
