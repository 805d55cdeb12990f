#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include <Eigen/Core>

namespace halfsym {

using Vec3 = Eigen::Vector3d;

/// Ordered list of 3D points.
///
/// Every coordinate is finite; construction and `push_back` reject NaN/Inf.
/// The container itself may be empty (split results can be); operations that
/// need at least one point check for it and throw `InvalidInput`.
class PointCloud {
public:
  PointCloud() = default;
  explicit PointCloud(std::vector<Vec3> points);

  std::size_t size() const noexcept { return points_.size(); }
  bool empty() const noexcept { return points_.empty(); }

  const Vec3& operator[](std::size_t i) const { return points_[i]; }
  std::span<const Vec3> points() const noexcept { return points_; }

  auto begin() const noexcept { return points_.begin(); }
  auto end() const noexcept { return points_.end(); }

  void reserve(std::size_t n) { points_.reserve(n); }
  void push_back(const Vec3& p);

  /// Moves the storage out; the cloud is left empty.
  std::vector<Vec3> release() && { return std::move(points_); }

  friend bool operator==(const PointCloud& a, const PointCloud& b) {
    return a.points_ == b.points_;
  }

private:
  std::vector<Vec3> points_;
};

/// Throws InvalidInput naming `what` when the cloud has no points.
void require_non_empty(const PointCloud& cloud, const char* what);

}  // namespace halfsym
