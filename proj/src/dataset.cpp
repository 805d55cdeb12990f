#include "halfsym/dataset.hpp"

#include <cmath>

#include <fmt/format.h>

#include "halfsym/error.hpp"
#include "halfsym/geometry.hpp"
#include "halfsym/parallel.hpp"

namespace halfsym {

namespace fs = std::filesystem;

NormalizationStats compute_normalization(const std::vector<PointCloud>& shapes) {
  if (shapes.empty()) throw InvalidInput("compute_normalization: no shapes");
  Vec3 sum = Vec3::Zero();
  std::size_t count = 0;
  for (const auto& s : shapes) {
    for (const auto& p : s) sum += p;
    count += s.size();
  }
  if (count == 0) throw InvalidInput("compute_normalization: shapes have no points");
  const Vec3 mean = sum / static_cast<double>(count);

  double sq = 0.0;
  for (const auto& s : shapes) {
    for (const auto& p : s) sq += (p - mean).squaredNorm();
  }
  const double scale = std::sqrt(sq / (3.0 * static_cast<double>(count)));
  if (!(scale > 0.0)) throw InvalidInput("compute_normalization: degenerate scale (all points equal)");
  return {mean, scale};
}

const char* to_string(DenormMode m) {
  return m == DenormMode::Standard ? "default" : "paper-literal";
}

PointCloud denormalize(const PointCloud& cloud, const Vec3& mean, double scale, DenormMode mode) {
  if (!(scale > 0.0)) throw InvalidInput("denormalize: scale must be positive");
  const Vec3 shift = mode == DenormMode::Standard ? mean : Vec3(-mean);
  std::vector<Vec3> out;
  out.reserve(cloud.size());
  for (const auto& p : cloud) out.push_back(p * scale + shift);
  return PointCloud(std::move(out));
}

PointCloud normalize(const PointCloud& cloud, const Vec3& mean, double scale) {
  if (!(scale > 0.0)) throw InvalidInput("normalize: scale must be positive");
  std::vector<Vec3> out;
  out.reserve(cloud.size());
  for (const auto& p : cloud) out.push_back((p - mean) / scale);
  return PointCloud(std::move(out));
}

HalfDatasetResult build_half_dataset(const DatasetManifest& input, const fs::path& out_dir,
                                     const HalfDatasetOptions& options) {
  fs::create_directories(out_dir);
  const fs::path out_abs = fs::absolute(out_dir).lexically_normal();

  HalfDatasetResult result;
  DatasetManifest& m = result.manifest;
  m.class_label = input.class_label;
  m.source = input.source;
  m.normalization = input.normalization;
  m.params = input.params;
  m.notes = input.notes;
  m.params["prep.operation"] = "half-object";
  m.params["prep.plane"] = Plane::yz().to_string();
  m.params["prep.dedup_boundary"] = options.dedup_boundary ? "true" : "false";
  m.params["prep.dtype"] = options.dtype == NpyDtype::Float32 ? "<f4" : "<f8";
  m.base_dir = out_dir;
  m.entries.resize(input.entries.size());

  std::vector<char> converted(input.entries.size(), 0);
  parallel_for(input.entries.size(), options.workers, [&](std::size_t i) {
    const ManifestEntry& src = input.entries[i];
    ManifestEntry& dst = m.entries[i];
    dst = src;
    if (src.split != Split::Train || !src.ok()) {
      if (src.ok()) {
        const fs::path original = fs::absolute(input.resolve(src)).lexically_normal();
        dst.path = original.lexically_relative(out_abs).generic_string();
      } else {
        dst.path = "-";
      }
      return;
    }
    try {
      const PointCloud full = load_cloud(input.resolve(src));
      if (src.kind == ShapeKind::Half) throw ValidationError("input is already a half-object");
      const PointCloud half = make_half_object(full, options.dedup_boundary);
      if (half.empty()) throw ValidationError("half-object is empty");
      const fs::path rel = fs::path(src.id + ".npy");
      fs::create_directories((out_dir / rel).parent_path());
      save_cloud(half, out_dir / rel, CloudFormat::Npy, options.dtype);
      dst.kind = ShapeKind::Half;
      dst.points = half.size();
      dst.path = rel.generic_string();
      converted[i] = 1;
    } catch (const std::exception& e) {
      dst.kind = ShapeKind::Half;
      dst.points = 0;
      dst.path = "-";
      dst.status = fmt::format("failed: {}", e.what());
    }
  });

  std::size_t train = 0;
  for (std::size_t i = 0; i < m.entries.size(); ++i) {
    const auto& src = input.entries[i];
    if (src.split != Split::Train) {
      ++result.passed_through;
      continue;
    }
    if (!src.ok()) {
      ++train;
      ++result.failed;
      continue;
    }
    ++train;
    converted[i] ? ++result.converted : ++result.failed;
  }
  if (train > 0 && static_cast<double>(result.failed) >
                       options.max_failure_fraction * static_cast<double>(train)) {
    throw Error(fmt::format("build_half_dataset: {} of {} train shapes failed; aborting",
                            result.failed, train));
  }
  return result;
}

}  // namespace halfsym
