#include "srkpa/stats.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "srkpa/errors.hpp"

namespace srkpa {

double quantile_sorted(std::span<const double> sorted, double q) {
  if (sorted.empty()) throw std::invalid_argument("quantile of an empty sample");
  const double pos = q * static_cast<double>(sorted.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const auto hi = std::min(lo + 1, sorted.size() - 1);
  const double frac = pos - static_cast<double>(lo);
  return sorted[lo] + frac * (sorted[hi] - sorted[lo]);
}

BoxplotSummary boxplot_summary(std::span<const double> times) {
  if (times.empty()) throw std::invalid_argument("boxplot of an empty sample");
  std::vector<double> s(times.begin(), times.end());
  std::sort(s.begin(), s.end());
  BoxplotSummary b;
  b.min = s.front();
  b.max = s.back();
  b.lower_quartile = quantile_sorted(s, 0.25);
  b.median = quantile_sorted(s, 0.5);
  b.upper_quartile = quantile_sorted(s, 0.75);
  const double iqr = b.upper_quartile - b.lower_quartile;
  const double lo_fence = b.lower_quartile - 1.5 * iqr;
  const double hi_fence = b.upper_quartile + 1.5 * iqr;
  b.lower_whisker = b.upper_whisker = b.median;
  bool first_inside = true;
  for (double v : s) {
    if (v < lo_fence || v > hi_fence) {
      b.outliers.push_back(v);
      continue;
    }
    if (first_inside) b.lower_whisker = v;
    first_inside = false;
    b.upper_whisker = v;
  }
  return b;
}

RunStatsSummary summarize(std::span<const double> times) {
  if (times.empty()) throw std::invalid_argument("summarize: empty sample");
  const BoxplotSummary box = boxplot_summary(times);
  RunStatsSummary r;
  r.count = times.size();
  r.median = box.median;
  r.lower_quartile = box.lower_quartile;
  r.upper_quartile = box.upper_quartile;
  r.min = box.min;
  r.max = box.max;
  r.outliers = box.outliers;
  const double n = static_cast<double>(times.size());
  r.mean = std::accumulate(times.begin(), times.end(), 0.0) / n;
  if (times.size() > 1) {
    double ss = 0;
    for (double t : times) ss += (t - r.mean) * (t - r.mean);
    const double sd = std::sqrt(ss / (n - 1));
    r.cv_percent = r.mean != 0 ? 100.0 * sd / r.mean : 0.0;
  }
  return r;
}

RunStatsSummary summarize_runs(const std::vector<RunRecord>& records, std::string label) {
  std::vector<double> times;
  std::size_t censored = 0;
  for (const auto& r : records) {
    if (r.status == RunStatus::Sat) times.push_back(r.effective_time());
    else if (r.status == RunStatus::Timeout) ++censored;
  }
  if (times.empty()) throw std::invalid_argument("summarize_runs: no successful run");
  RunStatsSummary s = summarize(times);
  s.censored_count = censored;
  if (label.empty() && !records.empty()) label = records.front().instance + "-" + records.front().config;
  s.label = std::move(label);
  return s;
}

namespace {

std::string fixed1(double v) {
  char buf[48];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::fixed, 1);
  return std::string(buf, end);
}

double parse_double(const std::string& s) {
  double v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) throw InputError("bad number '" + s + "' in table");
  return v;
}

}  // namespace

std::string to_table(const std::vector<RunStatsSummary>& summaries) {
  std::string out = "instance,count,median,Q1,Q3,mean,sigma_pct,censored\n";
  for (const auto& s : summaries) {
    out += s.label + "," + std::to_string(s.count) + "," + fixed1(s.median) + "," + fixed1(s.lower_quartile) + "," +
           fixed1(s.upper_quartile) + "," + fixed1(s.mean) + "," + std::to_string(std::lround(s.cv_percent)) + "," +
           std::to_string(s.censored_count) + "\n";
  }
  return out;
}

std::vector<RunStatsSummary> parse_table(std::string_view csv) {
  std::istringstream in{std::string(csv)};
  std::string line;
  if (!std::getline(in, line) || !line.starts_with("instance,count,median,Q1,Q3,mean,sigma_pct"))
    throw InputError("table: missing header");
  std::vector<RunStatsSummary> out;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<std::string> f;
    std::istringstream cells(line);
    std::string cell;
    while (std::getline(cells, cell, ',')) f.push_back(cell);
    if (f.size() != 8) throw InputError("table: expected 8 columns in '" + line + "'");
    RunStatsSummary s;
    s.label = f[0];
    s.count = static_cast<std::size_t>(parse_double(f[1]));
    s.median = parse_double(f[2]);
    s.lower_quartile = parse_double(f[3]);
    s.upper_quartile = parse_double(f[4]);
    s.mean = parse_double(f[5]);
    s.cv_percent = parse_double(f[6]);
    s.censored_count = static_cast<std::size_t>(parse_double(f[7]));
    out.push_back(std::move(s));
  }
  return out;
}

std::string boxplot_data(const std::vector<std::pair<std::string, BoxplotSummary>>& boxes) {
  std::string out = "# label min Q1 median Q3 max outliers...\n";
  for (const auto& [label, b] : boxes) {
    out += label + " " + fixed1(b.lower_whisker) + " " + fixed1(b.lower_quartile) + " " + fixed1(b.median) + " " +
           fixed1(b.upper_quartile) + " " + fixed1(b.upper_whisker);
    for (double o : b.outliers) out += " " + fixed1(o);
    out += "\n";
  }
  return out;
}

}  // namespace srkpa
