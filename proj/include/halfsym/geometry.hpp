#pragma once

#include <cstddef>
#include <string>

#include <Eigen/Core>

#include "halfsym/point_cloud.hpp"

namespace halfsym {

/// Reflection plane given by a unit normal and any point lying on it.
class Plane {
public:
  /// Throws InvalidPlane unless |normal| = 1 within 1e-12 and both vectors are finite.
  Plane(const Vec3& normal, const Vec3& point);

  /// Normalizes `direction` first; throws InvalidPlane for a zero or non-finite direction.
  static Plane from_direction(const Vec3& direction, const Vec3& point);

  /// The plane x = 0 used by the half-object pipeline.
  static Plane yz();

  const Vec3& normal() const noexcept { return normal_; }
  const Vec3& point() const noexcept { return point_; }
  /// Signed offset d in n.x + d = 0.
  double offset() const noexcept { return -normal_.dot(point_); }

  /// True when this is exactly the x = 0 plane (n = +-e_x, m.x = 0).
  bool is_yz() const noexcept;

  std::string to_string() const;

private:
  Vec3 normal_;
  Vec3 point_;
};

/// Affine reflection x -> A x + t.
struct ReflectionMap {
  Eigen::Matrix3d A;
  Vec3 t;

  Vec3 apply(const Vec3& p) const { return A * p + t; }
};

/// A = I - 2 n n^T, t = 2 n n^T m.
ReflectionMap make_reflection(const Plane& plane);

/// Applies the map to every point, preserving order.
PointCloud reflect_cloud(const PointCloud& cloud, const ReflectionMap& map);

/// Reflection about `plane`. For x = 0 this negates x exactly instead of going
/// through the matrix, so applying it twice is bitwise identity.
PointCloud reflect_cloud(const PointCloud& cloud, const Plane& plane);

/// Negates the x coordinate of every point.
PointCloud mirror_x(const PointCloud& cloud);

struct Halves {
  PointCloud left;   ///< x <= 0
  PointCloud right;  ///< x >= 0 (or x > 0 with dedup)
  std::size_t on_plane = 0;  ///< points with x == 0
  bool left_empty = false;
  bool right_empty = false;
};

/// Splits at x = 0. Points exactly on the plane go to both halves unless
/// `dedup_boundary` is set, in which case they go to the right half only.
Halves split_halves(const PointCloud& cloud, bool dedup_boundary = false);

/// mirror(left) followed by right. Every output point has x >= 0.
PointCloud make_half_object(const PointCloud& cloud, bool dedup_boundary = false);

/// half followed by its mirror about x = 0; exactly symmetric, 2|half| points.
PointCloud reconstruct_full(const PointCloud& half);

}  // namespace halfsym
