#pragma once

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "lrm/lrm.hpp"

namespace lrm::cli {

using nlohmann::json;

inline constexpr int kSchemaVersion = 1;

enum ExitCode : int { kOk = 0, kUsage = 2, kInvalidInput = 3, kNumeric = 4 };

/// Stable-coded diagnostic attached to the output envelope.
struct Warning {
  std::string code;
  std::string message;
};

/// One printable table; rendered aligned for `table` and comma-separated for `csv`.
struct Section {
  std::string title;
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
};

struct Report {
  json results = json::object();
  std::vector<Section> sections;
  std::vector<Warning> warnings;
  json inputs = json::array();
  /// Two-column curve text for --out.
  std::optional<std::string> curve;
};

inline std::string num(double v) {
  if (std::isnan(v)) return "nan";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

inline std::string exact(double v) { return std::isnan(v) ? "nan" : ingest::format_double(v); }

inline json nullable(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

inline std::string fnv1a64(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

struct InputOptions {
  std::string format = "auto";
  std::string range;
  std::string on_gap = "error";
  double missing = -999.9;
  int table = 0;
};

inline YearMonth parse_month_arg(const std::string& s) {
  const auto ym = ingest::detail::parse_year_month(s);
  if (!ym) throw ValidationError("expected YYYY-MM, got '" + s + "'");
  return *ym;
}

inline std::pair<std::string, std::string> split_colon(const std::string& s, const char* what) {
  const auto c = s.find(':');
  if (c == std::string::npos) throw ValidationError(std::string(what) + " must be of the form A:B");
  return {s.substr(0, c), s.substr(c + 1)};
}

inline std::size_t to_size(const std::string& s, const char* what) {
  std::size_t v = 0;
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || p != s.data() + s.size()) throw ValidationError(std::string("bad ") + what + " '" + s + "'");
  return v;
}

inline TimeSeries load(const std::string& path, const InputOptions& io, Report& rep) {
  const auto text = ingest::read_file(path);
  ingest::IngestOptions opts;
  opts.missing_sentinel = io.missing;
  opts.table = io.table;
  opts.on_gap = io.on_gap == "truncate" ? ingest::GapPolicy::truncate_at_first_gap : ingest::GapPolicy::error;
  if (io.format == "auto") opts.format = ingest::detect_format(text);
  else if (io.format == "cpc") opts.format = ingest::Format::cpc_table;
  else if (io.format == "csv") opts.format = ingest::Format::csv_pair;
  else opts.format = ingest::Format::column;
  if (!io.range.empty()) {
    const auto [a, b] = split_colon(io.range, "--range");
    opts.range = ingest::MonthRange{parse_month_arg(a), parse_month_arg(b)};
  }
  auto res = ingest::parse(text, opts);
  for (auto& w : res.warnings) rep.warnings.push_back({w.code, path + ": " + w.message});
  const auto& ts = res.series;
  json entry = {{"path", path}, {"fnv1a64", fnv1a64(text)}, {"rows", ts.size()}};
  entry["start"] = ts.start() ? json(ts.start()->to_string()) : json(nullptr);
  rep.inputs.push_back(std::move(entry));
  return res.series;
}

inline std::string two_column(const std::vector<double>& a, const std::vector<double>& b) {
  std::string out;
  for (std::size_t i = 0; i < a.size(); ++i) out += exact(a[i]) + " " + exact(b[i]) + "\n";
  return out;
}

// ---------------------------------------------------------------- commands

inline void cmd_stats(const TimeSeries& ts, double resolution, Report& rep) {
  const auto s = summarize(ts, resolution);
  auto& r = rep.results;
  r = {{"n", s.n},
       {"mean", s.mean},
       {"median", s.median},
       {"mode_first", s.mode_first},
       {"mode_first_count", s.mode_first_count},
       {"mode_second", s.mode_second ? json(*s.mode_second) : json(nullptr)},
       {"mode_second_count", s.mode_second_count},
       {"std_dev", s.std_dev},
       {"mean_abs_dev", s.mean_abs_dev},
       {"variance", s.variance},
       {"cv_percent", s.cv_percent ? json(*s.cv_percent) : json(nullptr)},
       {"mode_resolution", resolution}};
  if (!s.cv_percent) rep.warnings.push_back({"cv_undefined", "coefficient of variation undefined (zero mean or zero spread)"});
  rep.sections.push_back({"Summary statistics",
                          {"statistic", "value"},
                          {{"n", std::to_string(s.n)},
                           {"mean", num(s.mean)},
                           {"median", num(s.median)},
                           {"first mode", num(s.mode_first)},
                           {"second mode", s.mode_second ? num(*s.mode_second) : "-"},
                           {"standard deviation", num(s.std_dev)},
                           {"mean deviation", num(s.mean_abs_dev)},
                           {"variance", num(s.variance)},
                           {"CV (%)", s.cv_percent ? num(*s.cv_percent) : "undefined"}}});
}

inline void cmd_acf(const TimeSeries& ts, std::size_t max_lag, const std::string& method, const std::string& band,
                    Report& rep) {
  if (method != "fft" && method != "direct") throw ValidationError("--method must be fft or direct");
  const auto acf = method == "fft" ? acf_fft(ts, max_lag) : acf_direct(ts, max_lag);
  const auto zc = first_zero_crossing(acf);
  auto& r = rep.results;
  r = {{"n", acf.n}, {"max_lag", acf.max_lag}, {"method", method}, {"coefficients", acf.coefficients}};
  r["first_zero_crossing"] = zc ? json(*zc) : json(nullptr);
  Section sec{"Autocorrelation", {"lag", "r"}, {}};
  for (std::size_t k = 0; k <= acf.max_lag; ++k) sec.rows.push_back({std::to_string(k), num(acf.coefficients[k])});
  rep.sections.push_back(std::move(sec));
  Section diag{"Diagnostics", {"quantity", "value"}, {{"first zero crossing", zc ? std::to_string(*zc) : "none"}}};
  if (!band.empty()) {
    const auto [a, b] = split_colon(band, "--band");
    const auto lo = to_size(a, "band"), hi = to_size(b, "band");
    const double m = band_mean(acf, lo, hi);
    r["band"] = {{"lo", lo}, {"hi", hi}, {"mean", m}};
    diag.rows.push_back({"band mean [" + a + "," + b + "]", num(m)});
  }
  rep.sections.push_back(std::move(diag));
  std::vector<double> lags;
  for (std::size_t k = 0; k <= acf.max_lag; ++k) lags.push_back(static_cast<double>(k));
  rep.curve = two_column(lags, acf.coefficients);
}

inline void cmd_hurst(const TimeSeries& ts, std::size_t min_window, bool weighted, Report& rep) {
  const auto table = rs_table(ts, min_window);
  const auto est = fit_h(table.points, weighted);
  auto& r = rep.results;
  json pts = json::array();
  Section sec{"Rescaled range by window", {"window", "blocks", "mean_rs", "std_rs"}, {}};
  std::vector<double> w, m;
  for (const auto& p : table.points) {
    pts.push_back({{"window", p.window}, {"blocks", p.blocks}, {"mean_rs", p.mean_rs}, {"std_rs", p.std_rs}});
    sec.rows.push_back({std::to_string(p.window), std::to_string(p.blocks), num(p.mean_rs), num(p.std_rs)});
    w.push_back(static_cast<double>(p.window));
    m.push_back(p.mean_rs);
  }
  r["points"] = std::move(pts);
  r["skipped_blocks"] = table.skipped_blocks;
  r["min_window"] = min_window;
  r["estimate"] = {{"h", est.h},
                   {"std_err", est.std_err},
                   {"r_squared", est.r_squared},
                   {"weighted", est.weighted},
                   {"fractal_dimension", nullable(est.fractal_dimension)},
                   {"points_used", est.points_used}};
  Section fit{"Hurst fit", {"quantity", "value"},
              {{"H", num(est.h)}, {"S (std err)", num(est.std_err)}, {"R^2", num(est.r_squared)},
               {"weighted", weighted ? "yes" : "no"}, {"fractal dimension 1/H", num(est.fractal_dimension)}}};
  if (table.skipped_blocks)
    rep.warnings.push_back({"skipped_blocks", std::to_string(table.skipped_blocks) + " constant block(s) skipped"});
  if (est.out_of_range()) {
    rep.warnings.push_back({"h_out_of_range", "fitted H = " + num(est.h) + " lies outside (0, 1)"});
    r["fractal_correlation"] = nullptr;
    fit.rows.push_back({"fractal correlation rho", "undefined"});
  } else {
    const double rho = fractal_correlation(est.h);
    r["fractal_correlation"] = rho;
    fit.rows.push_back({"fractal correlation rho", num(rho)});
  }
  rep.sections.push_back(std::move(sec));
  rep.sections.push_back(std::move(fit));
  rep.curve = two_column(w, m);
}

inline void cmd_suite(const TimeSeries& ts, Report& rep) {
  const auto s = hurst_suite(ts);
  rep.results = {{"h_simple", s.h_simple},
                 {"h_corrected_rs", s.h_corrected_rs},
                 {"h_empirical", s.h_empirical},
                 {"h_corrected_empirical", s.h_corrected_empirical},
                 {"h_theoretical", s.h_theoretical},
                 {"analysed_length", s.analysed_length},
                 {"halving_windows", s.halving_windows},
                 {"divisor_windows", s.divisor_windows}};
  rep.sections.push_back({"Hurst exponent",
                          {"Hurst exponent", "Value"},
                          {{"Simple R/S Hurst estimation", num(s.h_simple)},
                           {"Corrected R over S Hurst exponent", num(s.h_corrected_rs)},
                           {"Empirical H", num(s.h_empirical)},
                           {"Corrected empirical H", num(s.h_corrected_empirical)},
                           {"Theoretical H", num(s.h_theoretical)}}});
  for (double h : {s.h_simple, s.h_corrected_rs, s.h_empirical, s.h_corrected_empirical})
    if (!(h > 0.0 && h < 1.0)) {
      rep.warnings.push_back({"h_out_of_range", "an estimate lies outside (0, 1): " + num(h)});
      break;
    }
  std::vector<double> w(s.divisor_windows.begin(), s.divisor_windows.end());
  rep.curve = two_column(w, s.divisor_mean_rs);
}

struct LyapArgs {
  EmbeddingParams params;
  std::string fit;
  double dt = 1.0;
  std::string grid;
  std::string sampling = "even";
};

/// "m=2,3;eps=0.2,0.3" → cartesian product over the named parameters.
inline std::vector<EmbeddingParams> expand_grid(const EmbeddingParams& base, const std::string& spec) {
  std::vector<EmbeddingParams> out{base};
  std::stringstream ss(spec);
  std::string item;
  while (std::getline(ss, item, ';')) {
    if (item.empty()) continue;
    const auto eq = item.find('=');
    if (eq == std::string::npos) throw ValidationError("grid entries must look like name=v1,v2");
    const auto key = item.substr(0, eq);
    std::vector<std::string> vals;
    std::stringstream vs(item.substr(eq + 1));
    for (std::string v; std::getline(vs, v, ',');)
      if (!v.empty()) vals.push_back(v);
    if (vals.empty()) throw ValidationError("grid entry '" + key + "' has no values");
    std::vector<EmbeddingParams> next;
    for (const auto& p : out)
      for (const auto& v : vals) {
        auto q = p;
        if (key == "m") q.m = to_size(v, "m");
        else if (key == "d") q.d = to_size(v, "d");
        else if (key == "theiler") q.theiler = to_size(v, "theiler");
        else if (key == "steps") q.steps = to_size(v, "steps");
        else if (key == "eps") {
          const auto x = ingest::detail::to_double(v);
          if (!x) throw ValidationError("bad eps '" + v + "'");
          q.eps = *x;
        } else throw ValidationError("unknown grid parameter '" + key + "' (use m, d, theiler, steps, eps)");
        next.push_back(q);
      }
    out = std::move(next);
  }
  return out;
}

inline json params_json(const EmbeddingParams& p) {
  return {{"m", p.m}, {"d", p.d}, {"theiler", p.theiler}, {"eps", p.eps}, {"n_ref", p.n_ref},
          {"steps", p.steps}, {"k_min", p.k_min}, {"seed", p.seed},
          {"sampling", p.sampling == ReferenceSampling::even ? "even" : "random"}};
}

inline void cmd_lyap(const TimeSeries& ts, LyapArgs a, Report& rep) {
  if (a.sampling != "even" && a.sampling != "random") throw ValidationError("--sampling must be even or random");
  a.params.sampling = a.sampling == "even" ? ReferenceSampling::even : ReferenceSampling::random;
  std::optional<std::pair<std::size_t, std::size_t>> range;
  if (!a.fit.empty()) {
    const auto [lo, hi] = split_colon(a.fit, "--fit");
    range = std::pair{to_size(lo, "fit start"), to_size(hi, "fit end")};
  }
  const bool is_grid = !a.grid.empty();
  const auto family = is_grid ? expand_grid(a.params, a.grid) : std::vector<EmbeddingParams>{a.params};

  json curves = json::array();
  std::string curve_text;
  for (const auto& p : family) {
    json entry = {{"params", params_json(p)}};
    DivergenceCurve c;
    try {
      c = lyap_k(ts, p);
    } catch (const NumericError& e) {
      if (!is_grid) throw;
      rep.warnings.push_back({"curve_failed", e.what()});
      entry["error"] = e.what();
      curves.push_back(std::move(entry));
      continue;
    }
    json sv = json::array();
    for (double v : c.s_values) sv.push_back(nullable(v));
    entry["s_values"] = std::move(sv);
    entry["ref_counts"] = c.ref_counts;
    entry["references_tried"] = c.references_tried;
    entry["references_accepted"] = c.references_accepted;
    std::string label = "m=" + std::to_string(p.m) + " d=" + std::to_string(p.d) + " eps=" + exact(p.eps) +
                        " theiler=" + std::to_string(p.theiler);
    Section sec{"Divergence curve (" + label + ")", {"delta", "S", "refs"}, {}};
    if (!curve_text.empty()) curve_text += "\n\n";
    if (is_grid) curve_text += "# " + label + "\n";
    for (std::size_t k = 0; k < c.s_values.size(); ++k) {
      sec.rows.push_back({std::to_string(k), num(c.s_values[k]), std::to_string(c.ref_counts[k])});
      curve_text += std::to_string(k) + " " + exact(c.s_values[k]) + "\n";
    }
    if (std::find(c.ref_counts.begin(), c.ref_counts.end(), 0u) != c.ref_counts.end())
      rep.warnings.push_back({"empty_steps", label + ": some steps have no contributing reference"});
    rep.sections.push_back(std::move(sec));
    if (range) {
      const auto f = lyap_fit(c, range->first, range->second, a.dt);
      entry["fit"] = {{"lambda1", f.lambda1}, {"fit_start", f.fit_start}, {"fit_end", f.fit_end},
                      {"r_squared", f.r_squared}, {"dt", f.dt}, {"chaos_consistent", f.chaos_consistent()}};
      rep.sections.push_back({"Lyapunov fit (" + label + ")",
                              {"quantity", "value"},
                              {{"lambda1", num(f.lambda1)},
                               {"range", std::to_string(f.fit_start) + ":" + std::to_string(f.fit_end)},
                               {"R^2", num(f.r_squared)},
                               {"positive with R^2 >= 0.8", f.chaos_consistent() ? "yes" : "no"}}});
    }
    curves.push_back(std::move(entry));
  }
  rep.results = {{"curves", std::move(curves)}};
  rep.curve = curve_text;
}

/// Overlap by calendar month when both are anchored, otherwise equal lengths.
inline std::pair<std::vector<double>, std::vector<double>> align(const TimeSeries& a, const TimeSeries& b) {
  if (a.start() && b.start() && a.step_months() == b.step_months()) {
    const long sa = a.start()->ordinal(), sb = b.start()->ordinal();
    const long step = a.step_months();
    if ((sa - sb) % step != 0) throw ValidationError("series are not on a common monthly grid");
    const long lo = std::max(sa, sb);
    const long hi = std::min(sa + step * static_cast<long>(a.size()), sb + step * static_cast<long>(b.size()));
    if (hi <= lo) throw ValidationError("series do not overlap in time");
    const auto ia = static_cast<std::size_t>((lo - sa) / step), ib = static_cast<std::size_t>((lo - sb) / step);
    const auto len = static_cast<std::size_t>((hi - lo) / step);
    auto va = a.values().subspan(ia, len);
    auto vb = b.values().subspan(ib, len);
    return {{va.begin(), va.end()}, {vb.begin(), vb.end()}};
  }
  if (a.size() != b.size())
    throw ValidationError("series lengths differ (" + std::to_string(a.size()) + " vs " + std::to_string(b.size()) +
                          ") and are not both calendar-anchored");
  return {{a.values().begin(), a.values().end()}, {b.values().begin(), b.values().end()}};
}

inline void cmd_permtest(const std::vector<double>& p, const std::vector<double>& j, std::size_t n_perm,
                         std::uint64_t seed, const std::string& tail_name, std::size_t threads, Report& rep) {
  const auto tail = tail_from_string(tail_name);
  const auto res = perm_test(p, j, n_perm, seed, tail, threads);
  json summary = json::object();
  const char* names[] = {"min", "q01", "q05", "q25", "median", "q75", "q95", "q99", "max"};
  Section dist{"Permutation distribution", {"quantile", "r"}, {}};
  for (std::size_t i = 0; i < res.summary.size(); ++i) {
    summary[names[i]] = res.summary[i];
    dist.rows.push_back({names[i], num(res.summary[i])});
  }
  rep.results = {{"r_obs", res.r_obs},
                 {"n", res.n},
                 {"n_perm", res.n_perm},
                 {"summary", std::move(summary)},
                 {"r_crit_lower", res.r_crit_lower},
                 {"pos_lower", res.pos_lower},
                 {"r_crit_upper", res.r_crit_upper},
                 {"pos_upper", res.pos_upper},
                 {"p_lower", res.p_lower},
                 {"p_upper", res.p_upper},
                 {"p_two_sided", res.p_two_sided},
                 {"seed", res.seed},
                 {"tail", std::string(to_string(tail))},
                 {"decision_5pct", res.reject_5pct ? "reject" : "fail_to_reject"}};
  rep.sections.push_back({"Permutation test",
                          {"quantity", "value"},
                          {{"n", std::to_string(res.n)},
                           {"permutations", std::to_string(res.n_perm)},
                           {"r observed", num(res.r_obs)},
                           {"r critical lower (pos " + std::to_string(res.pos_lower) + ")", num(res.r_crit_lower)},
                           {"r critical upper (pos " + std::to_string(res.pos_upper) + ")", num(res.r_crit_upper)},
                           {"p lower", num(res.p_lower)},
                           {"p upper", num(res.p_upper)},
                           {"p two-sided", num(res.p_two_sided)},
                           {"decision at 5% (" + std::string(to_string(tail)) + ")",
                            res.reject_5pct ? "reject" : "fail to reject"}}});
  rep.sections.push_back(std::move(dist));
  std::vector<double> rank;
  for (std::size_t i = 0; i < res.sorted.size(); ++i) rank.push_back(static_cast<double>(i + 1));
  rep.curve = two_column(rank, res.sorted);
}

// ---------------------------------------------------------------- rendering

inline void render_table(const Report& rep, std::ostream& out) {
  for (const auto& s : rep.sections) {
    std::vector<std::size_t> width(s.header.size(), 0);
    for (std::size_t c = 0; c < s.header.size(); ++c) width[c] = s.header[c].size();
    for (const auto& row : s.rows)
      for (std::size_t c = 0; c < row.size(); ++c) width[c] = std::max(width[c], row[c].size());
    out << s.title << "\n";
    auto line = [&](const std::vector<std::string>& row) {
      for (std::size_t c = 0; c < row.size(); ++c) {
        out << (c ? "  " : "  ") << row[c];
        if (c + 1 < row.size()) out << std::string(width[c] - row[c].size(), ' ');
      }
      out << "\n";
    };
    line(s.header);
    for (const auto& row : s.rows) line(row);
    out << "\n";
  }
  for (const auto& w : rep.warnings) out << "warning [" << w.code << "]: " << w.message << "\n";
}

inline void render_csv(const Report& rep, std::ostream& out) {
  for (const auto& s : rep.sections) {
    out << "# " << s.title << "\n";
    auto line = [&](const std::vector<std::string>& row) {
      for (std::size_t c = 0; c < row.size(); ++c) out << (c ? "," : "") << row[c];
      out << "\n";
    };
    line(s.header);
    for (const auto& row : s.rows) line(row);
  }
  for (const auto& w : rep.warnings) out << "# warning," << w.code << "," << w.message << "\n";
}

inline json envelope(const std::string& name, const std::vector<std::string>& argv, const Report& rep) {
  json warnings = json::array();
  for (const auto& w : rep.warnings) warnings.push_back({{"code", w.code}, {"message", w.message}});
  return {{"schema_version", kSchemaVersion},
          {"command", {{"name", name}, {"argv", argv}}},
          {"inputs", rep.inputs},
          {"results", rep.results},
          {"warnings", std::move(warnings)}};
}

inline void write_text(const std::string& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw ValidationError("cannot write '" + path + "'");
  f << text;
}

// ---------------------------------------------------------------- entry point

/// Runs one invocation; `args` excludes the program name.
inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Long-range memory and chaos diagnostics for time series", "lrm"};
  app.require_subcommand(1);
  app.fallthrough();

  std::string format = "table", out_path;
  std::uint64_t seed = 1;
  std::size_t threads = 0;
  InputOptions io;
  app.add_option("--format", format, "Output format")->check(CLI::IsMember({"table", "json", "csv"}));
  app.add_option("--out", out_path, "Curve data (two-column text); for gen, the column file");
  app.add_option("--seed", seed, "Seed for randomized commands");
  app.add_option("--threads", threads, "Worker threads (0 = all cores); results do not depend on it");
  app.add_option("--input-format", io.format, "Input file format")
      ->check(CLI::IsMember({"auto", "cpc", "csv", "column"}));
  app.add_option("--range", io.range, "Inclusive month range YYYY-MM:YYYY-MM");
  app.add_option("--on-gap", io.on_gap, "Interior gap policy")->check(CLI::IsMember({"error", "truncate"}));
  app.add_option("--missing", io.missing, "Missing-value sentinel");
  app.add_option("--table", io.table, "Table index within a multi-table CPC file");

  std::string input;
  auto add_input = [&](CLI::App* sc) { sc->add_option("--input", input, "Input series file")->required(); };

  double resolution = 0.1;
  auto* stats = app.add_subcommand("stats", "Descriptive statistics");
  add_input(stats);
  stats->add_option("--resolution", resolution, "Rounding step for the modes");

  std::size_t max_lag = 0;
  std::string method = "fft", band;
  auto* acf = app.add_subcommand("acf", "Autocorrelation function");
  add_input(acf);
  acf->add_option("--max-lag", max_lag, "Largest lag")->required();
  acf->add_option("--method", method, "fft or direct");
  acf->add_option("--band", band, "Mean of r over lags LO:HI");

  std::size_t min_window = kDefaultMinWindow;
  bool weighted = false;
  auto* hurst = app.add_subcommand("hurst", "R/S table and Hurst fit");
  add_input(hurst);
  hurst->add_option("--min-window", min_window, "Smallest block length");
  hurst->add_flag("--weighted", weighted, "Weight points by 1/std_rs^2");

  auto* suite = app.add_subcommand("suite", "Five-variant Hurst estimates");
  add_input(suite);

  LyapArgs la;
  auto* lyap = app.add_subcommand("lyap", "Kantz divergence curve and Lyapunov fit");
  add_input(lyap);
  lyap->add_option("--m", la.params.m, "Embedding dimension");
  lyap->add_option("--d", la.params.d, "Delay");
  lyap->add_option("--theiler", la.params.theiler, "Theiler window");
  lyap->add_option("--eps", la.params.eps, "Neighbourhood radius (standardized units)");
  lyap->add_option("--steps", la.params.steps, "Number of follow steps");
  lyap->add_option("--refs", la.params.n_ref, "Number of reference points");
  lyap->add_option("--kmin", la.params.k_min, "Minimum neighbours per reference");
  lyap->add_option("--sampling", la.sampling, "even or random reference sampling");
  lyap->add_option("--fit", la.fit, "Fit range A:B");
  lyap->add_option("--dt", la.dt, "Time per step");
  lyap->add_option("--grid", la.grid, "Parameter grid, e.g. m=2,3;eps=0.2,0.3");

  std::string x_path, y_path, tail = "two";
  std::vector<std::string> resultant_paths;
  std::size_t n_perm = 10000;
  auto* perm = app.add_subcommand("permtest", "Permutation test of correlation");
  perm->add_option("--x", x_path, "First series (kept fixed)");
  perm->add_option("--y", y_path, "Second series (permuted)")->required();
  perm->add_option("--resultant", resultant_paths, "U and V component files; sqrt(u^2+v^2) replaces --x")
      ->expected(2);
  perm->add_option("--n-perm", n_perm, "Number of permutations");
  perm->add_option("--tail", tail, "lower, upper or two")->check(CLI::IsMember({"lower", "upper", "two"}));

  synth::GenSpec gs;
  std::string kind;
  auto* gen = app.add_subcommand("gen", "Synthetic series");
  gen->add_option("--kind", kind, "white, walk, fgn, ar1, logistic, sine")->required();
  gen->add_option("--n", gs.n, "Length")->required();
  gen->add_option("--hurst", gs.hurst, "fgn target H");
  gen->add_option("--phi", gs.phi, "ar1 coefficient");
  gen->add_option("--r", gs.r, "logistic parameter");
  gen->add_option("--x0", gs.x0, "logistic start");
  gen->add_option("--period", gs.period, "sine period");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp& e) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  }

  const auto* sub = app.get_subcommands().front();
  const std::string name = sub->get_name();
  Report rep;
  try {
    if (sub == stats) cmd_stats(load(input, io, rep), resolution, rep);
    else if (sub == acf) cmd_acf(load(input, io, rep), max_lag, method, band, rep);
    else if (sub == hurst) cmd_hurst(load(input, io, rep), min_window, weighted, rep);
    else if (sub == suite) cmd_suite(load(input, io, rep), rep);
    else if (sub == lyap) {
      la.params.seed = seed;
      la.params.threads = threads;
      cmd_lyap(load(input, io, rep), la, rep);
    } else if (sub == perm) {
      std::optional<TimeSeries> xs;
      if (!resultant_paths.empty()) {
        if (!x_path.empty()) throw ValidationError("use either --x or --resultant, not both");
        const auto u = load(resultant_paths[0], io, rep);
        const auto v = load(resultant_paths[1], io, rep);
        const auto [ua, va] = align(u, v);
        const long shift = u.start() && v.start() ? std::max(u.start()->ordinal(), v.start()->ordinal()) : 0;
        xs = TimeSeries(resultant(ua, va), u.start() && v.start() ? std::optional(YearMonth::from_ordinal(shift))
                                                                  : std::nullopt);
      } else {
        if (x_path.empty()) throw ValidationError("permtest needs --x or --resultant");
        xs = load(x_path, io, rep);
      }
      const auto ys = load(y_path, io, rep);
      const auto [p, j] = align(*xs, ys);
      cmd_permtest(p, j, n_perm, seed, tail, threads, rep);
    } else if (sub == gen) {
      gs.kind = synth::kind_from_string(kind);
      gs.seed = seed;
      const auto ts = synth::generate(gs);
      const auto text = ingest::serialize_column(ts.values());
      rep.results = {{"kind", kind}, {"n", gs.n}, {"seed", seed}, {"fnv1a64", fnv1a64(text)}};
      if (out_path.empty()) {
        out << text;
        return kOk;
      }
      write_text(out_path, text);
      rep.results["path"] = out_path;
      rep.sections.push_back({"Generated series",
                              {"quantity", "value"},
                              {{"kind", kind}, {"n", std::to_string(gs.n)}, {"seed", std::to_string(seed)},
                               {"file", out_path}}});
    }
  } catch (const ParseError& e) {
    err << "error: invalid input: " << e.what() << "\n";
    return kInvalidInput;
  } catch (const ValidationError& e) {
    err << "error: invalid input: " << e.what() << "\n";
    return kInvalidInput;
  } catch (const NumericError& e) {
    err << "error: numeric failure: " << e.what() << "\n";
    return kNumeric;
  }

  if (rep.curve && !out_path.empty() && sub != gen) write_text(out_path, *rep.curve);
  if (format == "json") out << envelope(name, args, rep).dump(2) << "\n";
  else if (format == "csv") render_csv(rep, out);
  else render_table(rep, out);
  return kOk;
}

}  // namespace lrm::cli
