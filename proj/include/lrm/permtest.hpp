#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "lrm/error.hpp"
#include "lrm/parallel.hpp"
#include "lrm/random.hpp"

namespace lrm {

inline double pearson(std::span<const double> p, std::span<const double> j) {
  if (p.size() != j.size()) throw ValidationError("correlation inputs must have equal lengths");
  if (p.size() < 3) throw ValidationError("correlation needs at least 3 pairs");
  const double n = static_cast<double>(p.size());
  double mp = 0.0, mj = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    mp += p[i];
    mj += j[i];
  }
  mp /= n;
  mj /= n;
  double spp = 0.0, sjj = 0.0, spj = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    const double a = p[i] - mp, b = j[i] - mj;
    spp += a * a;
    sjj += b * b;
    spj += a * b;
  }
  if (!(spp > 0.0) || !(sjj > 0.0)) throw NumericError("correlation undefined for a constant input");
  return std::clamp(spj / std::sqrt(spp * sjj), -1.0, 1.0);
}

/// Element-wise sqrt(u² + v²).
inline std::vector<double> resultant(std::span<const double> u, std::span<const double> v) {
  if (u.size() != v.size()) throw ValidationError("resultant components must have equal lengths");
  std::vector<double> out(u.size());
  for (std::size_t i = 0; i < u.size(); ++i) out[i] = std::hypot(u[i], v[i]);
  return out;
}

enum class Tail { lower, upper, two };

inline std::string_view to_string(Tail t) {
  switch (t) {
    case Tail::lower: return "lower";
    case Tail::upper: return "upper";
    case Tail::two: return "two";
  }
  return "?";
}

inline Tail tail_from_string(std::string_view s) {
  for (Tail t : {Tail::lower, Tail::upper, Tail::two})
    if (to_string(t) == s) return t;
  throw ValidationError("tail must be lower, upper or two");
}

struct PermutationResult {
  double r_obs = 0.0;
  std::size_t n = 0;
  std::size_t n_perm = 0;
  /// Probabilities of the entries of `summary`.
  static constexpr std::array<double, 9> kSummaryLevels{0.0, 0.01, 0.05, 0.25, 0.5, 0.75, 0.95, 0.99, 1.0};
  std::array<double, 9> summary{};
  double r_crit_lower = 0.0;
  double r_crit_upper = 0.0;
  /// 1-based sorted positions the critical values were read from.
  std::size_t pos_lower = 0;
  std::size_t pos_upper = 0;
  double p_lower = 0.0;
  double p_upper = 0.0;
  double p_two_sided = 0.0;
  std::uint64_t seed = 0;
  Tail tail = Tail::two;
  bool reject_5pct = false;
  /// Ascending permuted correlations.
  std::vector<double> sorted;

  double median() const { return summary[4]; }
};

/// 1-based sorted position for probability q: ceil(q·count), at least 1.
inline std::size_t order_position(double q, std::size_t count) {
  const auto pos = static_cast<std::size_t>(std::ceil(q * static_cast<double>(count) - 1e-9));
  return std::clamp<std::size_t>(pos, 1, count);
}

/**
 * Permutation test for the correlation of p against shuffles of j.
 *
 * Permutation k shuffles j with Rng::substream(seed, k), so any thread count
 * yields the same sorted distribution. Critical values are read at sorted
 * positions ceil(0.05·n_perm) and floor(0.95·n_perm) (500 and 9500 for 10000
 * draws). p-values use (count + 1)/(n_perm + 1). The 5% decision compares r_obs
 * with the critical value of the requested tail; the two-sided decision uses
 * p_two_sided <= 0.05.
 */
inline PermutationResult perm_test(std::span<const double> p, std::span<const double> j, std::size_t n_perm,
                                   std::uint64_t seed, Tail tail, std::size_t threads = 1) {
  if (n_perm < 100) throw ValidationError("n_perm must be at least 100");
  PermutationResult res;
  res.r_obs = pearson(p, j);
  res.n = p.size();
  res.n_perm = n_perm;
  res.seed = seed;
  res.tail = tail;

  std::vector<double> r(n_perm);
  parallel_for(n_perm, threads, [&](std::size_t k) {
    std::vector<double> shuffled(j.begin(), j.end());
    auto rng = Rng::substream(seed, k);
    shuffle(std::span<double>(shuffled), rng);
    r[k] = pearson(p, shuffled);
  });
  std::stable_sort(r.begin(), r.end());

  for (std::size_t q = 0; q < res.summary.size(); ++q)
    res.summary[q] = r[order_position(PermutationResult::kSummaryLevels[q], n_perm) - 1];
  res.pos_lower = order_position(0.05, n_perm);
  res.pos_upper = std::max<std::size_t>(1, static_cast<std::size_t>(std::floor(0.95 * static_cast<double>(n_perm) + 1e-9)));
  res.r_crit_lower = r[res.pos_lower - 1];
  res.r_crit_upper = r[res.pos_upper - 1];

  std::size_t le = 0, ge = 0, abs_ge = 0;
  for (double v : r) {
    le += v <= res.r_obs;
    ge += v >= res.r_obs;
    abs_ge += std::abs(v) >= std::abs(res.r_obs);
  }
  const double denom = static_cast<double>(n_perm + 1);
  res.p_lower = static_cast<double>(le + 1) / denom;
  res.p_upper = static_cast<double>(ge + 1) / denom;
  res.p_two_sided = static_cast<double>(abs_ge + 1) / denom;
  switch (tail) {
    case Tail::lower: res.reject_5pct = res.r_obs < res.r_crit_lower; break;
    case Tail::upper: res.reject_5pct = res.r_obs > res.r_crit_upper; break;
    case Tail::two: res.reject_5pct = res.p_two_sided <= 0.05; break;
  }
  res.sorted = std::move(r);
  return res;
}

}  // namespace lrm
