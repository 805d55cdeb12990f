#include "halfsym/geometry.hpp"

#include <cmath>
#include <utility>

#include <fmt/format.h>

#include "halfsym/error.hpp"

namespace halfsym {

namespace {

bool finite(const Vec3& v) { return v.allFinite(); }

}  // namespace

PointCloud::PointCloud(std::vector<Vec3> points) : points_(std::move(points)) {
  for (std::size_t i = 0; i < points_.size(); ++i) {
    if (!finite(points_[i])) {
      throw ValidationError(fmt::format("point {} has a non-finite coordinate", i));
    }
  }
}

void PointCloud::push_back(const Vec3& p) {
  if (!finite(p)) {
    throw ValidationError(
        fmt::format("point {} has a non-finite coordinate", points_.size()));
  }
  points_.push_back(p);
}

void require_non_empty(const PointCloud& cloud, const char* what) {
  if (cloud.empty()) throw InvalidInput(fmt::format("{}: point cloud is empty", what));
}

Plane::Plane(const Vec3& normal, const Vec3& point) : normal_(normal), point_(point) {
  if (!finite(normal) || !finite(point)) throw InvalidPlane("plane has non-finite components");
  if (std::abs(normal.norm() - 1.0) > 1e-12) {
    throw InvalidPlane(fmt::format("plane normal is not unit length (|n| = {})", normal.norm()));
  }
}

Plane Plane::from_direction(const Vec3& direction, const Vec3& point) {
  const double len = direction.norm();
  if (!std::isfinite(len) || len == 0.0) throw InvalidPlane("plane normal must be non-zero");
  return Plane(direction / len, point);
}

Plane Plane::yz() { return Plane(Vec3::UnitX(), Vec3::Zero()); }

bool Plane::is_yz() const noexcept {
  return std::abs(normal_.x()) == 1.0 && normal_.y() == 0.0 && normal_.z() == 0.0 &&
         point_.x() == 0.0;
}

std::string Plane::to_string() const {
  return fmt::format("{},{},{},{},{},{}", normal_.x(), normal_.y(), normal_.z(), point_.x(),
                     point_.y(), point_.z());
}

ReflectionMap make_reflection(const Plane& plane) {
  const Vec3& n = plane.normal();
  const Eigen::Matrix3d nnT = n * n.transpose();
  return {Eigen::Matrix3d::Identity() - 2.0 * nnT, 2.0 * nnT * plane.point()};
}

PointCloud reflect_cloud(const PointCloud& cloud, const ReflectionMap& map) {
  std::vector<Vec3> out;
  out.reserve(cloud.size());
  for (const auto& p : cloud) out.push_back(map.apply(p));
  return PointCloud(std::move(out));
}

PointCloud reflect_cloud(const PointCloud& cloud, const Plane& plane) {
  if (plane.is_yz()) return mirror_x(cloud);
  return reflect_cloud(cloud, make_reflection(plane));
}

PointCloud mirror_x(const PointCloud& cloud) {
  std::vector<Vec3> out(cloud.begin(), cloud.end());
  for (auto& p : out) p.x() = -p.x();
  return PointCloud(std::move(out));
}

Halves split_halves(const PointCloud& cloud, bool dedup_boundary) {
  Halves h;
  for (const auto& p : cloud) {
    const double x = p.x();
    if (x == 0.0) ++h.on_plane;
    if (x < 0.0 || (x == 0.0 && !dedup_boundary)) h.left.push_back(p);
    if (x >= 0.0) h.right.push_back(p);
  }
  h.left_empty = h.left.empty();
  h.right_empty = h.right.empty();
  return h;
}

PointCloud make_half_object(const PointCloud& cloud, bool dedup_boundary) {
  Halves h = split_halves(cloud, dedup_boundary);
  std::vector<Vec3> out = std::move(mirror_x(h.left)).release();
  out.reserve(out.size() + h.right.size());
  for (const auto& p : h.right) out.push_back(p);
  // -0.0 from mirroring a boundary point compares equal to 0; store +0.
  for (auto& p : out) p.x() = p.x() == 0.0 ? 0.0 : p.x();
  return PointCloud(std::move(out));
}

PointCloud reconstruct_full(const PointCloud& half) {
  std::vector<Vec3> out(half.begin(), half.end());
  out.reserve(2 * half.size());
  for (const auto& p : half) out.emplace_back(-p.x(), p.y(), p.z());
  return PointCloud(std::move(out));
}

}  // namespace halfsym
