#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "halfsym/point_cloud.hpp"

namespace halfsym {

/// Greedy farthest point sampling.
///
/// Starts from `start`, then repeatedly picks the point whose squared distance
/// to the selected set is largest; ties go to the lowest index. Returns the
/// selected indices in selection order. Throws InvalidInput unless
/// 1 <= k <= N and start < N.
std::vector<std::size_t> farthest_point_indices(const PointCloud& cloud, std::size_t k,
                                                std::size_t start = 0);

PointCloud farthest_point_sample(const PointCloud& cloud, std::size_t k, std::size_t start = 0);

/// Same as above with the start point drawn uniformly from a seeded generator.
PointCloud farthest_point_sample_seeded(const PointCloud& cloud, std::size_t k,
                                        std::uint64_t seed);

}  // namespace halfsym
