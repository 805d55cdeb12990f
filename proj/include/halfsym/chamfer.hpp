#pragma once

#include <vector>

#include "halfsym/geometry.hpp"
#include "halfsym/point_cloud.hpp"
#include "halfsym/spatial.hpp"

namespace halfsym {

/// Two-sided Chamfer Distance with squared Euclidean distances:
///
///   CD(S1, S2) = mean_{x in S1} min_{y in S2} |x - y|^2
///              + mean_{y in S2} min_{x in S1} |x - y|^2
///
/// Picks the dense kernel for small pairs and k-d trees otherwise. Throws
/// InvalidInput if either cloud is empty.
double chamfer_distance(const PointCloud& s1, const PointCloud& s2);

/// Chamfer Distance using prebuilt indices (`i1` over `s1`, `i2` over `s2`).
double chamfer_distance(const PointCloud& s1, const NeighborIndex& i1, const PointCloud& s2,
                        const NeighborIndex& i2);

/// Chamfer Distance by exhaustive all-pairs evaluation.
double chamfer_distance_dense(const PointCloud& s1, const PointCloud& s2);

/// Structure-of-arrays copy of a cloud for the dense kernel; reuse it when one
/// cloud takes part in many comparisons.
class PackedCloud {
public:
  explicit PackedCloud(const PointCloud& cloud);
  std::size_t size() const noexcept { return x_.size(); }
  const double* x() const noexcept { return x_.data(); }
  const double* y() const noexcept { return y_.data(); }
  const double* z() const noexcept { return z_.data(); }

private:
  std::vector<double> x_, y_, z_;
};

double chamfer_distance_dense(const PackedCloud& s1, const PackedCloud& s2);

struct SymmetryScore {
  double value;  ///< CD between the cloud and its mirror, squared model units
  Plane plane;
};

/// CD between `cloud` and its reflection about `plane`.
SymmetryScore symmetry_score(const PointCloud& cloud, const Plane& plane = Plane::yz());

}  // namespace halfsym
