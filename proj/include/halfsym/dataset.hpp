#pragma once

#include <cstddef>
#include <filesystem>
#include <vector>

#include "halfsym/cloud_io.hpp"
#include "halfsym/manifest.hpp"
#include "halfsym/point_cloud.hpp"

namespace halfsym {

struct NormalizationStats {
  Vec3 mean;
  double scale;
};

/// mean: per-axis mean over every point of every shape. scale: population
/// standard deviation of all centered coordinates pooled across the three
/// axes. Throws InvalidInput for an empty set and when the scale is zero.
NormalizationStats compute_normalization(const std::vector<PointCloud>& shapes);

enum class DenormMode {
  Standard,      ///< x * sigma + mu
  PaperLiteral,  ///< x * sigma - mu
};

const char* to_string(DenormMode m);

/// Throws InvalidInput unless scale > 0.
PointCloud denormalize(const PointCloud& cloud, const Vec3& mean, double scale,
                       DenormMode mode = DenormMode::Standard);

/// (x - mu) / sigma.
PointCloud normalize(const PointCloud& cloud, const Vec3& mean, double scale);

struct HalfDatasetOptions {
  bool dedup_boundary = false;
  NpyDtype dtype = NpyDtype::Float64;
  unsigned workers = 1;
  /// Abort when more than this fraction of train shapes fail.
  double max_failure_fraction = 0.10;
};

struct HalfDatasetResult {
  DatasetManifest manifest;
  std::size_t converted = 0;
  std::size_t failed = 0;
  std::size_t passed_through = 0;
};

/// Writes make_half_object of every train shape to `out_dir/<id>.npy` and
/// returns the new manifest (based in `out_dir`). Non-train shapes are kept as
/// references to the original files. Per-shape failures are recorded in the
/// manifest; throws Error when they exceed the allowed fraction.
HalfDatasetResult build_half_dataset(const DatasetManifest& input,
                                     const std::filesystem::path& out_dir,
                                     const HalfDatasetOptions& options = {});

}  // namespace halfsym
