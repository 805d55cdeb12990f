#include "halfsym/chamfer.hpp"

#include <limits>

#if defined(__x86_64__)
#include <immintrin.h>
#endif

#include "halfsym/error.hpp"

namespace halfsym {

namespace {

// Pairs up to this many point-pairs use the dense kernel.
constexpr std::size_t kDensePairLimit = std::size_t{1} << 18;

double mean(const std::vector<double>& v) {
  double sum = 0.0;
  for (double d : v) sum += d;
  return sum / static_cast<double>(v.size());
}

double directed_indexed(const PointCloud& from, const NeighborIndex& to) {
  double sum = 0.0;
  for (const auto& p : from) sum += to.nearest(p).squared_distance;
  return sum / static_cast<double>(from.size());
}

}  // namespace

PackedCloud::PackedCloud(const PointCloud& cloud) {
  x_.reserve(cloud.size());
  y_.reserve(cloud.size());
  z_.reserve(cloud.size());
  for (const auto& p : cloud) {
    x_.push_back(p.x());
    y_.push_back(p.y());
    z_.push_back(p.z());
  }
}

namespace {

// Rows [begin, end) of `a` against all of `b`: writes each row's minimum and
// folds every distance into col_min.
void dense_rows_scalar(const PackedCloud& a, const PackedCloud& b, std::size_t begin,
                       std::size_t end, double* row_min, double* col_min) {
  const std::size_t m = b.size();
  const double* bx = b.x();
  const double* by = b.y();
  const double* bz = b.z();
  for (std::size_t i = begin; i < end; ++i) {
    const double ax = a.x()[i];
    const double ay = a.y()[i];
    const double az = a.z()[i];
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < m; ++j) {
      const double dx = ax - bx[j];
      const double dy = ay - by[j];
      const double dz = az - bz[j];
      const double d = dx * dx + dy * dy + dz * dz;
      best = d < best ? d : best;
      col_min[j] = d < col_min[j] ? d : col_min[j];
    }
    row_min[i] = best;
  }
}

#if defined(__x86_64__) && (defined(__GNUC__) || defined(__clang__))
#define HALFSYM_HAVE_AVX2_KERNEL 1

// Four rows at a time against four columns per step. No FMA, so every squared
// distance is bitwise equal to the scalar expression.
__attribute__((target("avx2"))) std::size_t dense_rows_avx2(const PackedCloud& a,
                                                            const PackedCloud& b, double* row_min,
                                                            double* col_min) {
  constexpr std::size_t kRows = 4;
  const std::size_t n = a.size();
  const std::size_t m = b.size();
  const std::size_t m4 = m - m % 4;
  const double* bx = b.x();
  const double* by = b.y();
  const double* bz = b.z();
  const double inf = std::numeric_limits<double>::infinity();
  std::size_t i = 0;
  for (; i + kRows <= n; i += kRows) {
    __m256d ax[kRows], ay[kRows], az[kRows], best[kRows];
    for (std::size_t k = 0; k < kRows; ++k) {
      ax[k] = _mm256_set1_pd(a.x()[i + k]);
      ay[k] = _mm256_set1_pd(a.y()[i + k]);
      az[k] = _mm256_set1_pd(a.z()[i + k]);
      best[k] = _mm256_set1_pd(inf);
    }
    for (std::size_t j = 0; j < m4; j += 4) {
      const __m256d x = _mm256_loadu_pd(bx + j);
      const __m256d y = _mm256_loadu_pd(by + j);
      const __m256d z = _mm256_loadu_pd(bz + j);
      __m256d col = _mm256_loadu_pd(col_min + j);
      for (std::size_t k = 0; k < kRows; ++k) {
        const __m256d dx = _mm256_sub_pd(ax[k], x);
        const __m256d dy = _mm256_sub_pd(ay[k], y);
        const __m256d dz = _mm256_sub_pd(az[k], z);
        const __m256d d = _mm256_add_pd(
            _mm256_add_pd(_mm256_mul_pd(dx, dx), _mm256_mul_pd(dy, dy)), _mm256_mul_pd(dz, dz));
        best[k] = _mm256_min_pd(d, best[k]);
        col = _mm256_min_pd(d, col);
      }
      _mm256_storeu_pd(col_min + j, col);
    }
    for (std::size_t k = 0; k < kRows; ++k) {
      alignas(32) double lanes[4];
      _mm256_store_pd(lanes, best[k]);
      double r = lanes[0];
      for (int l = 1; l < 4; ++l) r = lanes[l] < r ? lanes[l] : r;
      const double ax_s = a.x()[i + k];
      const double ay_s = a.y()[i + k];
      const double az_s = a.z()[i + k];
      for (std::size_t j = m4; j < m; ++j) {
        const double dx = ax_s - bx[j];
        const double dy = ay_s - by[j];
        const double dz = az_s - bz[j];
        const double d = dx * dx + dy * dy + dz * dz;
        r = d < r ? d : r;
        col_min[j] = d < col_min[j] ? d : col_min[j];
      }
      row_min[i + k] = r;
    }
  }
  return i;
}

bool cpu_has_avx2() {
  static const bool has = __builtin_cpu_supports("avx2");
  return has;
}
#endif

}  // namespace

double chamfer_distance_dense(const PackedCloud& s1, const PackedCloud& s2) {
  if (s1.size() == 0 || s2.size() == 0) throw InvalidInput("chamfer_distance: point cloud is empty");
  std::vector<double> row_min(s1.size());
  std::vector<double> col_min(s2.size(), std::numeric_limits<double>::infinity());
  std::size_t done = 0;
#ifdef HALFSYM_HAVE_AVX2_KERNEL
  if (cpu_has_avx2()) done = dense_rows_avx2(s1, s2, row_min.data(), col_min.data());
#endif
  dense_rows_scalar(s1, s2, done, s1.size(), row_min.data(), col_min.data());
  return mean(row_min) + mean(col_min);
}

double chamfer_distance_dense(const PointCloud& s1, const PointCloud& s2) {
  require_non_empty(s1, "chamfer_distance");
  require_non_empty(s2, "chamfer_distance");
  return chamfer_distance_dense(PackedCloud(s1), PackedCloud(s2));
}

double chamfer_distance(const PointCloud& s1, const NeighborIndex& i1, const PointCloud& s2,
                        const NeighborIndex& i2) {
  require_non_empty(s1, "chamfer_distance");
  require_non_empty(s2, "chamfer_distance");
  if (i1.size() != s1.size() || i2.size() != s2.size()) {
    throw InvalidInput("chamfer_distance: index does not match its cloud");
  }
  return directed_indexed(s1, i2) + directed_indexed(s2, i1);
}

double chamfer_distance(const PointCloud& s1, const PointCloud& s2) {
  require_non_empty(s1, "chamfer_distance");
  require_non_empty(s2, "chamfer_distance");
  if (s1.size() * s2.size() <= kDensePairLimit) return chamfer_distance_dense(s1, s2);
  const NeighborIndex i1(s1);
  const NeighborIndex i2(s2);
  return chamfer_distance(s1, i1, s2, i2);
}

SymmetryScore symmetry_score(const PointCloud& cloud, const Plane& plane) {
  require_non_empty(cloud, "symmetry_score");
  return {chamfer_distance(cloud, reflect_cloud(cloud, plane)), plane};
}

}  // namespace halfsym
