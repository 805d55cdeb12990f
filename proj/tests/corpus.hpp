#pragma once

// Synthetic corpora for the pipeline tests.

#include <filesystem>
#include <random>
#include <string>
#include <vector>

#include <fmt/format.h>

#include "halfsym/cloud_io.hpp"
#include "halfsym/point_cloud.hpp"

namespace corpus {

using halfsym::PointCloud;
using halfsym::Vec3;

/// Random ellipsoid-surface shape that is exactly mirror symmetric about x = 0:
/// every point with x > 0 has its exact negated twin. `n` must be even.
inline PointCloud symmetric_shape(std::mt19937_64& rng, std::size_t n) {
  std::uniform_real_distribution<double> axis(0.5, 1.5);
  std::normal_distribution<double> g;
  const Vec3 radii(axis(rng), axis(rng), axis(rng));
  const double lift = g(rng) * 0.2;
  std::vector<Vec3> pts;
  pts.reserve(n);
  while (pts.size() < n) {
    Vec3 v(g(rng), g(rng), g(rng));
    if (v.norm() < 1e-6) continue;
    v = v.normalized().cwiseProduct(radii);
    v.x() = std::abs(v.x());
    v.z() += lift;
    pts.push_back(v);
    pts.push_back(Vec3(-v.x(), v.y(), v.z()));
  }
  return PointCloud(std::move(pts));
}

/// Writes `<dir>/train/s###.npy` and `<dir>/val/s###.npy`.
inline void write_symmetric_corpus(const std::filesystem::path& dir, std::uint64_t seed,
                                   std::size_t train, std::size_t val, std::size_t points) {
  std::mt19937_64 rng(seed);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir / "train");
  std::filesystem::create_directories(dir / "val");
  for (std::size_t i = 0; i < train + val; ++i) {
    const char* split = i < train ? "train" : "val";
    halfsym::save_cloud(symmetric_shape(rng, points), dir / split / fmt::format("s{:03}.npy", i));
  }
}

}  // namespace corpus
