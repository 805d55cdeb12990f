#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include <Eigen/Core>
#include <Eigen/Geometry>

#include "halfsym/point_cloud.hpp"

namespace halfsym {

struct Neighbor {
  std::size_t index;
  double squared_distance;
};

/// Immutable k-d tree over a point cloud for exact nearest-neighbor queries.
///
/// Nodes split at the median of the widest bounding-box axis; leaves hold at
/// most `kLeafSize` points. Results are identical to exhaustive search,
/// including ties, which resolve to the lowest original point index.
class NeighborIndex {
public:
  static constexpr std::size_t kLeafSize = 16;

  /// Throws InvalidInput for an empty cloud.
  explicit NeighborIndex(const PointCloud& cloud);

  Neighbor nearest(const Vec3& query) const;

  std::size_t size() const noexcept { return coords_.size() / 3; }
  const Eigen::AlignedBox3d& bounds() const noexcept { return bounds_; }

private:
  struct Node {
    // Leaf: [begin, end) into the permuted arrays. Inner: children + split.
    std::uint32_t begin = 0;
    std::uint32_t end = 0;
    std::int32_t left = -1;
    std::int32_t right = -1;
    int axis = 0;
    double split = 0.0;
  };

  std::int32_t build(std::vector<std::uint32_t>& order, std::uint32_t begin, std::uint32_t end,
                     const PointCloud& cloud);
  void search(std::int32_t node, const double* q, Neighbor& best) const;

  std::vector<double> coords_;         // xyz, permuted into leaf order
  std::vector<std::uint32_t> ids_;     // original index of each permuted point
  std::vector<Node> nodes_;
  Eigen::AlignedBox3d bounds_;
};

}  // namespace halfsym
