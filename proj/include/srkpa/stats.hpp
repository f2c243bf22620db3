#pragma once

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "srkpa/harness.hpp"

namespace srkpa {

/// Runtime estimators of one instance/configuration.
///
/// Quartiles interpolate linearly between order statistics (position
/// q * (count - 1) in the sorted sample). cv_percent is 100 * sample
/// standard deviation / mean, 0 for a single observation. Outliers are the
/// observations outside [Q1 - 1.5 IQR, Q3 + 1.5 IQR].
struct RunStatsSummary {
  std::string label;
  std::size_t count = 0;
  double median = 0, lower_quartile = 0, upper_quartile = 0;
  double mean = 0, cv_percent = 0;
  double min = 0, max = 0;
  std::vector<double> outliers;
  std::size_t censored_count = 0;
};

/// Linear-interpolation quantile of an ascending sample, q in [0, 1].
double quantile_sorted(std::span<const double> sorted, double q);

/// Throws std::invalid_argument on an empty sample.
RunStatsSummary summarize(std::span<const double> times);

struct BoxplotSummary {
  double min = 0, lower_quartile = 0, median = 0, upper_quartile = 0, max = 0;
  double lower_whisker = 0, upper_whisker = 0;  // most extreme points inside the fences
  std::vector<double> outliers;                 // ascending
};

BoxplotSummary boxplot_summary(std::span<const double> times);

/// Summary over successful runs (SAT) using RunRecord::effective_time();
/// timeouts are counted in censored_count. Errors and other statuses are
/// ignored. Throws when no run succeeded.
RunStatsSummary summarize_runs(const std::vector<RunRecord>& records, std::string label = {});

/// CSV with columns instance,count,median,Q1,Q3,mean,sigma_pct,censored.
std::string to_table(const std::vector<RunStatsSummary>& summaries);
/// Parses to_table output back (estimators only, no outliers).
std::vector<RunStatsSummary> parse_table(std::string_view csv);

/// Gnuplot-friendly rows: label min Q1 median Q3 max outliers...
std::string boxplot_data(const std::vector<std::pair<std::string, BoxplotSummary>>& boxes);

}  // namespace srkpa
