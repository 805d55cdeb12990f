#include "halfsym/spatial.hpp"

#include <algorithm>
#include <limits>

#include "halfsym/error.hpp"

namespace halfsym {

NeighborIndex::NeighborIndex(const PointCloud& cloud) {
  require_non_empty(cloud, "build_index");
  if (cloud.size() > std::numeric_limits<std::uint32_t>::max()) {
    throw InvalidInput("build_index: too many points");
  }
  for (const auto& p : cloud) bounds_.extend(p);

  const auto n = static_cast<std::uint32_t>(cloud.size());
  std::vector<std::uint32_t> order(n);
  for (std::uint32_t i = 0; i < n; ++i) order[i] = i;
  nodes_.reserve(2 * (n / kLeafSize + 1));
  build(order, 0, n, cloud);

  ids_ = order;
  coords_.resize(3 * static_cast<std::size_t>(n));
  for (std::uint32_t i = 0; i < n; ++i) {
    const Vec3& p = cloud[order[i]];
    coords_[3 * i] = p.x();
    coords_[3 * i + 1] = p.y();
    coords_[3 * i + 2] = p.z();
  }
}

std::int32_t NeighborIndex::build(std::vector<std::uint32_t>& order, std::uint32_t begin,
                                  std::uint32_t end, const PointCloud& cloud) {
  const auto id = static_cast<std::int32_t>(nodes_.size());
  nodes_.push_back(Node{begin, end});
  if (end - begin <= kLeafSize) return id;

  Eigen::AlignedBox3d box;
  for (std::uint32_t i = begin; i < end; ++i) box.extend(cloud[order[i]]);
  int axis = 0;
  box.sizes().maxCoeff(&axis);

  const std::uint32_t mid = begin + (end - begin) / 2;
  // Index tie-break keeps construction deterministic for repeated coordinates.
  std::nth_element(order.begin() + begin, order.begin() + mid, order.begin() + end,
                   [&](std::uint32_t a, std::uint32_t b) {
                     const double ca = cloud[a][axis];
                     const double cb = cloud[b][axis];
                     return ca < cb || (ca == cb && a < b);
                   });
  const double split = cloud[order[mid]][axis];

  const std::int32_t left = build(order, begin, mid, cloud);
  const std::int32_t right = build(order, mid, end, cloud);
  Node& node = nodes_[static_cast<std::size_t>(id)];
  node.left = left;
  node.right = right;
  node.axis = axis;
  node.split = split;
  return id;
}

Neighbor NeighborIndex::nearest(const Vec3& query) const {
  Neighbor best{std::numeric_limits<std::size_t>::max(), std::numeric_limits<double>::infinity()};
  const double q[3] = {query.x(), query.y(), query.z()};
  search(0, q, best);
  return best;
}

void NeighborIndex::search(std::int32_t node_id, const double* q, Neighbor& best) const {
  const Node& node = nodes_[static_cast<std::size_t>(node_id)];
  if (node.left < 0) {
    for (std::uint32_t i = node.begin; i < node.end; ++i) {
      const double* p = &coords_[3 * static_cast<std::size_t>(i)];
      const double dx = q[0] - p[0];
      const double dy = q[1] - p[1];
      const double dz = q[2] - p[2];
      const double d = dx * dx + dy * dy + dz * dz;
      const std::size_t id = ids_[i];
      if (d < best.squared_distance || (d == best.squared_distance && id < best.index)) {
        best = {id, d};
      }
    }
    return;
  }

  // Left subtree holds coordinates <= split, right subtree >= split.
  const double diff = q[node.axis] - node.split;
  const bool go_left = diff <= 0.0;
  const std::int32_t near = go_left ? node.left : node.right;
  const std::int32_t far = go_left ? node.right : node.left;
  search(near, q, best);
  // `<=` so that equal-distance points with a lower index are still found.
  if (diff * diff <= best.squared_distance) search(far, q, best);
}

}  // namespace halfsym
