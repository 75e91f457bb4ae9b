#pragma once

#include <cmath>
#include <cstdio>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "lrm/error.hpp"

namespace lrm {

/// Calendar month, month in 1..12.
struct YearMonth {
  int year = 0;
  int month = 1;

  /// Months since year 0, January.
  constexpr long ordinal() const { return static_cast<long>(year) * 12 + (month - 1); }

  static constexpr YearMonth from_ordinal(long ord) {
    long y = ord >= 0 ? ord / 12 : -((-ord + 11) / 12);
    return {static_cast<int>(y), static_cast<int>(ord - y * 12) + 1};
  }

  constexpr YearMonth plus_months(long k) const { return from_ordinal(ordinal() + k); }

  friend constexpr auto operator<=>(const YearMonth& a, const YearMonth& b) {
    return a.ordinal() <=> b.ordinal();
  }
  friend constexpr bool operator==(const YearMonth&, const YearMonth&) = default;

  std::string to_string() const {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%04d-%02d", year, month);
    return buf;
  }
};

/// Ordered, finite, non-empty samples with an optional monthly calendar anchor.
class TimeSeries {
 public:
  explicit TimeSeries(std::vector<double> values, std::optional<YearMonth> start = std::nullopt,
                      int step_months = 1, std::string label = {})
      : values_(std::move(values)), start_(start), step_months_(step_months), label_(std::move(label)) {
    if (values_.empty()) throw ValidationError("time series must contain at least one sample");
    if (step_months_ <= 0) throw ValidationError("step_months must be positive");
    if (start_ && (start_->month < 1 || start_->month > 12))
      throw ValidationError("start month must be in 1..12");
    for (std::size_t i = 0; i < values_.size(); ++i)
      if (!std::isfinite(values_[i]))
        throw ValidationError("non-finite sample at index " + std::to_string(i));
  }

  std::span<const double> values() const noexcept { return values_; }
  std::size_t size() const noexcept { return values_.size(); }
  double operator[](std::size_t i) const { return values_[i]; }

  const std::optional<YearMonth>& start() const noexcept { return start_; }
  int step_months() const noexcept { return step_months_; }
  const std::string& label() const noexcept { return label_; }

  /// Calendar month of sample i, if anchored.
  std::optional<YearMonth> date_of(std::size_t i) const {
    if (!start_) return std::nullopt;
    return start_->plus_months(static_cast<long>(i) * step_months_);
  }

  /// Same anchor and label, new values.
  TimeSeries with_values(std::vector<double> values) const {
    return TimeSeries(std::move(values), start_, step_months_, label_);
  }

 private:
  std::vector<double> values_;
  std::optional<YearMonth> start_;
  int step_months_;
  std::string label_;
};

}  // namespace lrm
