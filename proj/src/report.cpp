#include "halfsym/report.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

#include "halfsym/error.hpp"

namespace halfsym {

MetricReport build_report(std::vector<ScoreEntry> scores, std::size_t bins, std::string metric) {
  if (scores.empty()) throw InvalidInput("build_report: no scores");
  if (bins == 0) throw InvalidInput("build_report: bins must be at least 1");
  for (const auto& s : scores) {
    if (!std::isfinite(s.value)) {
      throw InvalidInput(fmt::format("build_report: score for '{}' is not finite", s.id));
    }
  }

  MetricReport r;
  r.metric = std::move(metric);
  r.scores = std::move(scores);
  Aggregate& a = r.aggregate;
  a.count = r.scores.size();
  a.min = a.max = r.scores.front().value;
  double sum = 0.0;
  for (const auto& s : r.scores) {
    sum += s.value;
    a.min = std::min(a.min, s.value);
    a.max = std::max(a.max, s.value);
  }
  const double n = static_cast<double>(a.count);
  a.mean = sum / n;
  double sq = 0.0;
  for (const auto& s : r.scores) sq += (s.value - a.mean) * (s.value - a.mean);
  a.std = std::sqrt(sq / n);

  Histogram& h = r.histogram;
  if (a.min == a.max) {
    h.edges = {a.min, a.max};
    h.counts = {a.count};
    return r;
  }
  const double width = (a.max - a.min) / static_cast<double>(bins);
  h.edges.resize(bins + 1);
  for (std::size_t k = 0; k < bins; ++k) h.edges[k] = a.min + width * static_cast<double>(k);
  h.edges[bins] = a.max;
  h.counts.assign(bins, 0);
  for (const auto& s : r.scores) {
    auto k = static_cast<std::size_t>((s.value - a.min) / width);
    h.counts[std::min(k, bins - 1)]++;
  }
  return r;
}

std::string format_number(double v) { return fmt::format("{}", v); }

std::string csv_field(std::string_view s) {
  if (s.find_first_of(",\"\r\n") == std::string_view::npos) return std::string(s);
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

void write_scores_csv(const MetricReport& report, std::ostream& out) {
  out << "id," << csv_field(report.metric) << "\r\n";
  for (const auto& s : report.scores) out << csv_field(s.id) << ',' << format_number(s.value) << "\r\n";
}

void write_histogram_csv(const MetricReport& report, std::ostream& out) {
  out << "bin,lower,upper,count\r\n";
  const auto& h = report.histogram;
  for (std::size_t k = 0; k < h.counts.size(); ++k) {
    out << k << ',' << format_number(h.edges[k]) << ',' << format_number(h.edges[k + 1]) << ','
        << h.counts[k] << "\r\n";
  }
}

void write_summary_csv(const MetricReport& report, std::ostream& out) {
  const auto& a = report.aggregate;
  out << "statistic,value\r\n";
  out << "count," << a.count << "\r\n";
  out << "mean," << format_number(a.mean) << "\r\n";
  out << "std," << format_number(a.std) << "\r\n";
  out << "min," << format_number(a.min) << "\r\n";
  out << "max," << format_number(a.max) << "\r\n";
}

namespace {

std::string xml_escape(std::string_view s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

}  // namespace

void write_histogram_svg(const MetricReport& report, std::ostream& out, std::string_view title) {
  constexpr double kWidth = 800, kHeight = 500;
  constexpr double kLeft = 80, kRight = 20, kTop = 50, kBottom = 70;
  constexpr double plot_w = kWidth - kLeft - kRight;
  constexpr double plot_h = kHeight - kTop - kBottom;
  const auto& h = report.histogram;
  const std::size_t bins = h.counts.size();
  const std::size_t peak = std::max<std::size_t>(1, *std::max_element(h.counts.begin(), h.counts.end()));
  const double bar_w = plot_w / static_cast<double>(bins);
  const double base_y = kTop + plot_h;

  out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  out << fmt::format(
      "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"{0}\" height=\"{1}\" "
      "viewBox=\"0 0 {0} {1}\">\n",
      kWidth, kHeight);
  out << fmt::format("<rect x=\"0\" y=\"0\" width=\"{}\" height=\"{}\" fill=\"white\"/>\n", kWidth,
                     kHeight);
  out << fmt::format(
      "<text x=\"{:.2f}\" y=\"30\" font-family=\"sans-serif\" font-size=\"16\" "
      "text-anchor=\"middle\">{}</text>\n",
      kWidth / 2, xml_escape(title));

  for (std::size_t k = 0; k < bins; ++k) {
    const double bh = plot_h * static_cast<double>(h.counts[k]) / static_cast<double>(peak);
    out << fmt::format(
        "<rect x=\"{:.2f}\" y=\"{:.2f}\" width=\"{:.2f}\" height=\"{:.2f}\" fill=\"#4c72b0\" "
        "stroke=\"#2a3f66\" stroke-width=\"0.5\"/>\n",
        kLeft + bar_w * static_cast<double>(k), base_y - bh, bar_w, bh);
  }

  out << fmt::format(
      "<line x1=\"{0:.2f}\" y1=\"{1:.2f}\" x2=\"{2:.2f}\" y2=\"{1:.2f}\" stroke=\"black\"/>\n",
      kLeft, base_y, kLeft + plot_w);
  out << fmt::format(
      "<line x1=\"{0:.2f}\" y1=\"{1:.2f}\" x2=\"{0:.2f}\" y2=\"{2:.2f}\" stroke=\"black\"/>\n", kLeft,
      kTop, base_y);

  constexpr int kTicks = 5;
  const double lo = h.edges.front();
  const double hi = h.edges.back();
  for (int t = 0; t < kTicks; ++t) {
    const double frac = static_cast<double>(t) / (kTicks - 1);
    const double x = kLeft + plot_w * frac;
    out << fmt::format(
        "<line x1=\"{0:.2f}\" y1=\"{1:.2f}\" x2=\"{0:.2f}\" y2=\"{2:.2f}\" stroke=\"black\"/>\n", x,
        base_y, base_y + 5);
    out << fmt::format(
        "<text x=\"{:.2f}\" y=\"{:.2f}\" font-family=\"sans-serif\" font-size=\"11\" "
        "text-anchor=\"middle\">{:.4g}</text>\n",
        x, base_y + 20, lo + (hi - lo) * frac);
  }
  out << fmt::format(
      "<text x=\"{:.2f}\" y=\"{:.2f}\" font-family=\"sans-serif\" font-size=\"11\" "
      "text-anchor=\"end\">0</text>\n",
      kLeft - 8, base_y + 4);
  out << fmt::format(
      "<text x=\"{:.2f}\" y=\"{:.2f}\" font-family=\"sans-serif\" font-size=\"11\" "
      "text-anchor=\"end\">{}</text>\n",
      kLeft - 8, kTop + 4, peak);

  out << fmt::format(
      "<text x=\"{:.2f}\" y=\"{:.2f}\" font-family=\"sans-serif\" font-size=\"13\" "
      "text-anchor=\"middle\">{}</text>\n",
      kLeft + plot_w / 2, kHeight - 20, xml_escape(report.metric));
  out << fmt::format(
      "<text x=\"20\" y=\"{0:.2f}\" font-family=\"sans-serif\" font-size=\"13\" "
      "text-anchor=\"middle\" transform=\"rotate(-90 20 {0:.2f})\">Count</text>\n",
      kTop + plot_h / 2);
  out << "</svg>\n";
}

}  // namespace halfsym
