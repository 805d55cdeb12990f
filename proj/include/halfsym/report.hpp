#pragma once

#include <cstddef>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

namespace halfsym {

struct ScoreEntry {
  std::string id;
  double value;
};

struct Aggregate {
  std::size_t count = 0;
  double mean = 0.0;
  double std = 0.0;  ///< population standard deviation
  double min = 0.0;
  double max = 0.0;
};

/// Equal-width bins; `edges.size() == counts.size() + 1`.
struct Histogram {
  std::vector<double> edges;
  std::vector<std::size_t> counts;
};

struct MetricReport {
  std::string metric;
  std::vector<ScoreEntry> scores;
  Aggregate aggregate;
  Histogram histogram;
};

/// Aggregates in input order and bins [min, max] into `bins` equal-width bins.
/// When min == max the histogram collapses to a single bin holding every score.
/// Throws InvalidInput for no scores, zero bins or non-finite values.
MetricReport build_report(std::vector<ScoreEntry> scores, std::size_t bins,
                          std::string metric = "value");

/// Shortest decimal form that parses back to the same double.
std::string format_number(double v);

/// RFC 4180 quoting when needed.
std::string csv_field(std::string_view s);

/// `id,<metric>` rows.
void write_scores_csv(const MetricReport& report, std::ostream& out);
/// `bin,lower,upper,count` rows.
void write_histogram_csv(const MetricReport& report, std::ostream& out);
/// `statistic,value` rows: count, mean, std, min, max.
void write_summary_csv(const MetricReport& report, std::ostream& out);
/// Static 800x500 SVG 1.1 bar chart of the histogram.
void write_histogram_svg(const MetricReport& report, std::ostream& out, std::string_view title);

}  // namespace halfsym
