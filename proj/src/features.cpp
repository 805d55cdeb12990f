#include "halfsym/features.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include <Eigen/Eigenvalues>
#include <fmt/format.h>

#include "halfsym/error.hpp"

namespace halfsym {

namespace {

constexpr std::size_t kRadialBins = 16;

double safe_ratio(double num, double den) { return den > 0.0 ? num / den : 0.0; }

}  // namespace

FeatureVector MomentFeatureExtractor::extract(std::string_view, const PointCloud& cloud) const {
  require_non_empty(cloud, "moment features");
  const double n = static_cast<double>(cloud.size());

  Vec3 centroid = Vec3::Zero();
  for (const auto& p : cloud) centroid += p;
  centroid /= n;

  double m2[6] = {};
  double m3[10] = {};
  Vec3 lo = Vec3::Constant(std::numeric_limits<double>::infinity());
  Vec3 hi = -lo;
  Vec3 abs_sum = Vec3::Zero();
  double r_max = 0.0;
  for (const auto& p : cloud) {
    const Vec3 q = p - centroid;
    const double x = q.x(), y = q.y(), z = q.z();
    m2[0] += x * x, m2[1] += y * y, m2[2] += z * z;
    m2[3] += x * y, m2[4] += x * z, m2[5] += y * z;
    m3[0] += x * x * x, m3[1] += y * y * y, m3[2] += z * z * z;
    m3[3] += x * x * y, m3[4] += x * x * z, m3[5] += x * y * y;
    m3[6] += y * y * z, m3[7] += x * z * z, m3[8] += y * z * z;
    m3[9] += x * y * z;
    lo = lo.cwiseMin(q);
    hi = hi.cwiseMax(q);
    abs_sum += q.cwiseAbs();
    r_max = std::max(r_max, q.norm());
  }
  for (double& v : m2) v /= n;
  for (double& v : m3) v /= n;

  double radial[kRadialBins] = {};
  for (const auto& p : cloud) {
    std::size_t bin = 0;
    if (r_max > 0.0) {
      const double t = (p - centroid).norm() / r_max;
      bin = std::min(kRadialBins - 1, static_cast<std::size_t>(t * kRadialBins));
    }
    radial[bin] += 1.0;
  }

  Eigen::Matrix3d cov;
  cov << m2[0], m2[3], m2[4], m2[3], m2[1], m2[5], m2[4], m2[5], m2[2];
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> eig(cov, Eigen::EigenvaluesOnly);
  // Ascending from Eigen; clamp round-off negatives.
  const double l1 = std::max(0.0, eig.eigenvalues()[2]);
  const double l2 = std::max(0.0, eig.eigenvalues()[1]);
  const double l3 = std::max(0.0, eig.eigenvalues()[0]);
  const double sum = l1 + l2 + l3;
  double entropy = 0.0;
  for (double l : {l1, l2, l3}) {
    const double e = safe_ratio(l, sum);
    if (e > 0.0) entropy -= e * std::log(e);
  }

  FeatureVector f(kDimension);
  std::size_t k = 0;
  for (int a = 0; a < 3; ++a) f[k++] = centroid[a];
  for (double v : m2) f[k++] = v;
  for (double v : m3) f[k++] = v;
  for (double v : radial) f[k++] = v / n;
  for (int a = 0; a < 3; ++a) {
    f[k++] = lo[a];
    f[k++] = hi[a];
    f[k++] = hi[a] - lo[a];
    f[k++] = abs_sum[a] / n;
  }
  const double pca[16] = {l1,
                          l2,
                          l3,
                          safe_ratio(l1, sum),
                          safe_ratio(l2, sum),
                          safe_ratio(l3, sum),
                          safe_ratio(l2, l1),
                          safe_ratio(l3, l1),
                          safe_ratio(l3, l2),
                          safe_ratio(l1 - l2, l1),
                          safe_ratio(l2 - l3, l1),
                          safe_ratio(l1 - l3, l1),
                          std::cbrt(l1 * l2 * l3),
                          entropy,
                          std::sqrt(l1),
                          sum};
  for (double v : pca) f[k++] = v;
  return f;
}

ExternalFeatureTable::ExternalFeatureTable(std::string label, std::size_t dimension,
                                           std::map<std::string, FeatureVector, std::less<>> rows)
    : label_(std::move(label)), dimension_(dimension), rows_(std::move(rows)) {}

ExternalFeatureTable ExternalFeatureTable::load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError(fmt::format("cannot open feature table '{}'", path.string()));
  std::string line;
  std::size_t offset = 0;
  if (!std::getline(in, line)) throw ParseError("feature table is empty", 0);
  if (!line.empty() && line.back() == '\r') line.pop_back();

  std::vector<std::string> header;
  {
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) header.push_back(cell);
  }
  if (header.size() < 2 || header[0] != "id") {
    throw ParseError("feature table header must start with 'id,f0'", 0);
  }
  const std::size_t dim = header.size() - 1;
  for (std::size_t d = 0; d < dim; ++d) {
    if (header[d + 1] != fmt::format("f{}", d)) {
      throw ParseError(fmt::format("unexpected feature column '{}'", header[d + 1]), 0);
    }
  }
  offset += line.size() + 1;

  std::map<std::string, FeatureVector, std::less<>> rows;
  while (std::getline(in, line)) {
    const std::size_t row_offset = offset;
    offset += line.size() + 1;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;

    const auto comma = line.find(',');
    if (comma == std::string::npos) throw ParseError("row has no features", row_offset);
    std::string id = line.substr(0, comma);
    FeatureVector values(static_cast<Eigen::Index>(dim));
    std::size_t pos = comma + 1;
    for (std::size_t d = 0; d < dim; ++d) {
      const std::size_t end = d + 1 < dim ? line.find(',', pos) : line.size();
      if (end == std::string::npos) {
        throw ParseError(fmt::format("row '{}' has fewer than {} features", id, dim),
                         row_offset + pos);
      }
      double v = 0.0;
      const auto [ptr, ec] = std::from_chars(line.data() + pos, line.data() + end, v);
      if (ec != std::errc() || ptr != line.data() + end) {
        throw ParseError(fmt::format("bad number in row '{}'", id), row_offset + pos);
      }
      if (!std::isfinite(v)) throw ValidationError(fmt::format("non-finite feature in row '{}'", id));
      values[static_cast<Eigen::Index>(d)] = v;
      pos = end + 1;
    }
    if (!rows.emplace(id, std::move(values)).second) {
      throw ParseError(fmt::format("duplicate id '{}'", id), row_offset);
    }
  }
  return ExternalFeatureTable(fmt::format("external:{}", path.filename().string()), dim,
                              std::move(rows));
}

FeatureVector ExternalFeatureTable::extract(std::string_view shape_id, const PointCloud&) const {
  const auto it = rows_.find(shape_id);
  if (it == rows_.end()) {
    throw MissingFeature(fmt::format("no features for shape '{}' in {}", shape_id, label_));
  }
  return it->second;
}

void save_feature_table(const std::filesystem::path& path,
                        const std::map<std::string, FeatureVector, std::less<>>& rows) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError(fmt::format("cannot write feature table '{}'", path.string()));
  const Eigen::Index dim = rows.empty() ? 0 : rows.begin()->second.size();
  out << "id";
  for (Eigen::Index d = 0; d < dim; ++d) out << ",f" << d;
  out << '\n';
  for (const auto& [id, values] : rows) {
    if (values.size() != dim) throw InvalidInput("save_feature_table: ragged feature rows");
    out << id;
    for (Eigen::Index d = 0; d < dim; ++d) out << ',' << fmt::format("{}", values[d]);
    out << '\n';
  }
  if (!out) throw IoError(fmt::format("write failed for '{}'", path.string()));
}

}  // namespace halfsym
