#include "halfsym/sampling.hpp"

#include <limits>
#include <random>

#include <fmt/format.h>

#include "halfsym/error.hpp"

namespace halfsym {

std::vector<std::size_t> farthest_point_indices(const PointCloud& cloud, std::size_t k,
                                                std::size_t start) {
  const std::size_t n = cloud.size();
  if (k == 0) throw InvalidInput("farthest_point_sample: k must be at least 1");
  if (k > n) {
    throw InvalidInput(fmt::format("farthest_point_sample: k = {} exceeds cloud size {}", k, n));
  }
  if (start >= n) {
    throw InvalidInput(fmt::format("farthest_point_sample: start {} out of range", start));
  }

  std::vector<double> min_dist(n, std::numeric_limits<double>::infinity());
  std::vector<std::size_t> selected;
  selected.reserve(k);
  std::size_t current = start;
  for (std::size_t step = 0; step < k; ++step) {
    selected.push_back(current);
    min_dist[current] = -1.0;  // never chosen again
    const Vec3& c = cloud[current];
    std::size_t next = n;
    double next_dist = -1.0;
    for (std::size_t i = 0; i < n; ++i) {
      if (min_dist[i] < 0.0) continue;
      const double d = (cloud[i] - c).squaredNorm();
      if (d < min_dist[i]) min_dist[i] = d;
      if (min_dist[i] > next_dist) {
        next_dist = min_dist[i];
        next = i;
      }
    }
    current = next;
  }
  return selected;
}

PointCloud farthest_point_sample(const PointCloud& cloud, std::size_t k, std::size_t start) {
  const auto idx = farthest_point_indices(cloud, k, start);
  std::vector<Vec3> out;
  out.reserve(idx.size());
  for (auto i : idx) out.push_back(cloud[i]);
  return PointCloud(std::move(out));
}

PointCloud farthest_point_sample_seeded(const PointCloud& cloud, std::size_t k,
                                        std::uint64_t seed) {
  require_non_empty(cloud, "farthest_point_sample");
  std::mt19937_64 rng(seed);
  // Modulo instead of uniform_int_distribution: the latter is not portable
  // across standard library implementations.
  const std::size_t start = static_cast<std::size_t>(rng() % cloud.size());
  return farthest_point_sample(cloud, k, start);
}

}  // namespace halfsym
