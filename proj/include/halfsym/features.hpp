#pragma once

#include <cstddef>
#include <filesystem>
#include <map>
#include <string>
#include <string_view>

#include <Eigen/Core>

#include "halfsym/point_cloud.hpp"

namespace halfsym {

using FeatureVector = Eigen::VectorXd;

/// Maps one shape to a fixed-length feature vector for FPD.
class FeatureExtractor {
public:
  virtual ~FeatureExtractor() = default;
  /// Name recorded in reports next to every FPD value.
  virtual std::string label() const = 0;
  virtual std::size_t dimension() const = 0;
  virtual FeatureVector extract(std::string_view shape_id, const PointCloud& cloud) const = 0;
};

/// Deterministic 63-dimensional geometric descriptor. Layout:
///
///   [0, 3)    centroid
///   [3, 9)    centered second moments  xx yy zz xy xz yz
///   [9, 19)   centered third moments   xxx yyy zzz xxy xxz xyy yyz xzz yzz xyz
///   [19, 35)  histogram of distance to centroid, 16 bins over [0, r_max], fractions
///   [35, 47)  per axis x, y, z: centered min, centered max, range, mean |offset|
///   [47, 63)  PCA: l1 l2 l3 (descending), l_i / sum, l2/l1, l3/l1, l3/l2,
///             linearity, planarity, anisotropy, omnivariance, eigenentropy,
///             sqrt(l1), sum
///
/// Everything after the centroid is translation invariant.
class MomentFeatureExtractor final : public FeatureExtractor {
public:
  static constexpr std::size_t kDimension = 63;
  std::string label() const override { return "geometric-moments-63"; }
  std::size_t dimension() const override { return kDimension; }
  FeatureVector extract(std::string_view shape_id, const PointCloud& cloud) const override;
};

/// Features precomputed elsewhere (e.g. by a neural network) and read from a
/// CSV table with header `id,f0,...,f{D-1}`.
class ExternalFeatureTable final : public FeatureExtractor {
public:
  /// Throws ParseError on malformed rows, ValidationError on non-finite values.
  static ExternalFeatureTable load(const std::filesystem::path& path);

  ExternalFeatureTable(std::string label, std::size_t dimension,
                       std::map<std::string, FeatureVector, std::less<>> rows);

  std::string label() const override { return label_; }
  std::size_t dimension() const override { return dimension_; }
  /// Ignores the cloud; throws MissingFeature if `shape_id` has no row.
  FeatureVector extract(std::string_view shape_id, const PointCloud& cloud) const override;

  std::size_t rows() const noexcept { return rows_.size(); }

private:
  std::string label_;
  std::size_t dimension_;
  std::map<std::string, FeatureVector, std::less<>> rows_;
};

/// Writes a table readable by ExternalFeatureTable::load.
void save_feature_table(const std::filesystem::path& path,
                        const std::map<std::string, FeatureVector, std::less<>>& rows);

inline FeatureVector extract_features(const PointCloud& cloud, const FeatureExtractor& extractor,
                                      std::string_view shape_id = {}) {
  return extractor.extract(shape_id, cloud);
}

}  // namespace halfsym
