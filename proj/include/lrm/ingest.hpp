#pragma once

#include <charconv>
#include <cmath>
#include <fstream>
#include <optional>
#include <span>
#include <sstream>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include "lrm/error.hpp"
#include "lrm/time_series.hpp"

namespace lrm::ingest {

enum class Format { cpc_table, csv_pair, column };
enum class GapPolicy { error, truncate_at_first_gap };

struct MonthRange {
  YearMonth first;
  YearMonth last;
};

struct IngestOptions {
  Format format = Format::cpc_table;
  double missing_sentinel = -999.9;
  std::optional<MonthRange> range;
  GapPolicy on_gap = GapPolicy::error;
  /// cpc_table only: which table to read when a file holds several (0 = first).
  int table = 0;
};

struct Warning {
  std::string code;
  std::string message;
};

struct IngestResult {
  TimeSeries series;
  std::vector<Warning> warnings;
};

namespace detail {

inline std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

inline std::vector<std::string_view> split_ws(std::string_view s) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && (s[i] == ' ' || s[i] == '\t' || s[i] == '\r')) ++i;
    std::size_t j = i;
    while (j < s.size() && s[j] != ' ' && s[j] != '\t' && s[j] != '\r') ++j;
    if (j > i) out.push_back(s.substr(i, j - i));
    i = j;
  }
  return out;
}

inline std::optional<double> to_double(std::string_view s) {
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  double v = 0.0;
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || p != s.data() + s.size() || !std::isfinite(v)) return std::nullopt;
  return v;
}

inline std::optional<int> to_int(std::string_view s) {
  int v = 0;
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || p != s.data() + s.size()) return std::nullopt;
  return v;
}

inline std::vector<std::string_view> lines(std::string_view text) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i <= text.size()) {
    auto j = text.find('\n', i);
    if (j == std::string_view::npos) j = text.size();
    out.push_back(text.substr(i, j - i));
    i = j + 1;
  }
  return out;
}

/// One calendar slot; nullopt marks an absent value.
struct Slot {
  std::optional<YearMonth> date;
  std::optional<double> value;
  std::size_t line = 0;
};

inline IngestResult assemble(std::vector<Slot> slots, const IngestOptions& opts) {
  std::vector<Warning> warnings;
  if (opts.range) {
    std::vector<Slot> kept;
    for (auto& s : slots)
      if (s.date && *s.date >= opts.range->first && *s.date <= opts.range->last) kept.push_back(s);
    slots = std::move(kept);
  }
  while (!slots.empty() && !slots.back().value) slots.pop_back();
  std::size_t lead = 0;
  while (lead < slots.size() && !slots[lead].value) ++lead;
  if (lead > 0) {
    warnings.push_back({"leading_missing_dropped",
                        std::to_string(lead) + " leading missing value(s) dropped"});
    slots.erase(slots.begin(), slots.begin() + static_cast<std::ptrdiff_t>(lead));
  }
  if (slots.empty()) throw ValidationError("no samples remain after missing-value and range selection");

  std::vector<double> values;
  values.reserve(slots.size());
  for (std::size_t i = 0; i < slots.size(); ++i) {
    if (!slots[i].value) {
      std::string where = slots[i].date ? slots[i].date->to_string()
                                        : "sample " + std::to_string(i + 1);
      if (opts.on_gap == GapPolicy::error)
        throw ValidationError("gap in series at " + where + " (line " + std::to_string(slots[i].line) + ")");
      warnings.push_back({"truncated_at_gap", "series truncated at first gap (" + where + "), " +
                                                  std::to_string(slots.size() - i) + " slot(s) discarded"});
      break;
    }
    values.push_back(*slots[i].value);
  }
  return {TimeSeries(std::move(values), slots.front().date), std::move(warnings)};
}

inline bool is_missing(double v, double sentinel) { return std::abs(v - sentinel) < 1e-6; }

inline std::vector<Slot> parse_cpc(std::string_view text, const IngestOptions& opts) {
  std::vector<Slot> slots;
  int table = -1;
  bool in_data = false;
  bool have_year = false;
  int last_year = 0;
  const auto ls = lines(text);
  for (std::size_t ln = 0; ln < ls.size(); ++ln) {
    const auto tokens = split_ws(ls[ln]);
    if (tokens.empty() || tokens.front().front() == '#') continue;
    const auto year = to_int(tokens.front());
    if (!year) {
      // Header text; a header following data rows starts a new table.
      in_data = false;
      continue;
    }
    if (!in_data) {
      in_data = true;
      ++table;
      have_year = false;
    }
    if (table != opts.table) continue;
    if (tokens.size() != 13)
      throw ParseError(ln + 1, "expected year followed by 12 monthly values, got " +
                                   std::to_string(tokens.size()) + " tokens");
    if (have_year && *year <= last_year) throw ParseError(ln + 1, "years must be strictly increasing");
    if (have_year)
      for (int y = last_year + 1; y < *year; ++y)
        for (int m = 1; m <= 12; ++m) slots.push_back({YearMonth{y, m}, std::nullopt, ln + 1});
    for (int m = 1; m <= 12; ++m) {
      const auto v = to_double(tokens[static_cast<std::size_t>(m)]);
      if (!v) throw ParseError(ln + 1, "malformed value '" + std::string(tokens[static_cast<std::size_t>(m)]) + "'");
      slots.push_back({YearMonth{*year, m}, is_missing(*v, opts.missing_sentinel) ? std::nullopt : v, ln + 1});
    }
    last_year = *year;
    have_year = true;
  }
  if (table < opts.table) throw ValidationError("table " + std::to_string(opts.table) + " not found in input");
  return slots;
}

inline std::optional<YearMonth> parse_year_month(std::string_view s) {
  s = trim(s);
  if (s.size() != 7 || s[4] != '-') return std::nullopt;
  const auto y = to_int(s.substr(0, 4));
  const auto m = to_int(s.substr(5, 2));
  if (!y || !m || *m < 1 || *m > 12) return std::nullopt;
  return YearMonth{*y, *m};
}

inline std::vector<Slot> parse_csv(std::string_view text, const IngestOptions& opts) {
  std::vector<Slot> slots;
  const auto ls = lines(text);
  for (std::size_t ln = 0; ln < ls.size(); ++ln) {
    const auto line = trim(ls[ln]);
    if (line.empty() || line.front() == '#') continue;
    const auto comma = line.find(',');
    if (comma == std::string_view::npos) throw ParseError(ln + 1, "expected 'YYYY-MM,value'");
    const auto date = parse_year_month(line.substr(0, comma));
    if (!date) throw ParseError(ln + 1, "malformed date (expected YYYY-MM)");
    const auto v = to_double(trim(line.substr(comma + 1)));
    if (!v) throw ParseError(ln + 1, "malformed value");
    if (!slots.empty()) {
      const auto prev = *slots.back().date;
      if (*date <= prev) throw ParseError(ln + 1, "dates must be strictly increasing");
      for (long o = prev.ordinal() + 1; o < date->ordinal(); ++o)
        slots.push_back({YearMonth::from_ordinal(o), std::nullopt, ln + 1});
    }
    slots.push_back({date, is_missing(*v, opts.missing_sentinel) ? std::nullopt : v, ln + 1});
  }
  return slots;
}

inline std::vector<Slot> parse_column(std::string_view text, const IngestOptions& opts) {
  if (opts.range) throw ValidationError("range selection requires a dated format (cpc_table or csv_pair)");
  std::vector<Slot> slots;
  const auto ls = lines(text);
  for (std::size_t ln = 0; ln < ls.size(); ++ln) {
    const auto line = trim(ls[ln]);
    if (line.empty() || line.front() == '#') continue;
    const auto v = to_double(line);
    if (!v) throw ParseError(ln + 1, "malformed value '" + std::string(line) + "'");
    slots.push_back({std::nullopt, is_missing(*v, opts.missing_sentinel) ? std::nullopt : v, ln + 1});
  }
  return slots;
}

}  // namespace detail

/**
 * Parse a document into a contiguous monthly series.
 *
 * cpc_table: `year v1 ... v12` rows; non-numeric lines are headers and separate tables.
 * csv_pair: `YYYY-MM,value`; missing months are gaps. column: one value per line.
 * `#` lines are comments in every format. Leading and trailing missing values are
 * dropped; interior ones follow `opts.on_gap`.
 */
inline IngestResult parse(std::string_view text, const IngestOptions& opts = {}) {
  if (detail::trim(text).empty()) throw ValidationError("input is empty");
  if (opts.range && opts.range->first > opts.range->last)
    throw ValidationError("range start must not be after range end");
  switch (opts.format) {
    case Format::cpc_table: return detail::assemble(detail::parse_cpc(text, opts), opts);
    case Format::csv_pair: return detail::assemble(detail::parse_csv(text, opts), opts);
    case Format::column: return detail::assemble(detail::parse_column(text, opts), opts);
  }
  throw ValidationError("unknown format");
}

/// Guess the format from the first non-comment line.
inline Format detect_format(std::string_view text) {
  for (auto line : detail::lines(text)) {
    line = detail::trim(line);
    if (line.empty() || line.front() == '#') continue;
    if (const auto comma = line.find(','); comma != std::string_view::npos)
      if (detail::parse_year_month(line.substr(0, comma))) return Format::csv_pair;
    const auto tokens = detail::split_ws(line);
    if (tokens.size() == 1 && detail::to_double(tokens[0])) return Format::column;
    return Format::cpc_table;
  }
  return Format::column;
}

/// Shortest round-trip text for a double.
inline std::string format_double(double v) {
  char buf[32];
  auto [p, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, p);
}

/// Column format, one shortest-round-trip value per line.
inline std::string serialize_column(std::span<const double> values) {
  std::string out;
  for (double v : values) {
    out += format_double(v);
    out += '\n';
  }
  return out;
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot open input file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace lrm::ingest
