#pragma once

#include <cstddef>
#include <vector>

#include "halfsym/emd.hpp"
#include "halfsym/point_cloud.hpp"

namespace halfsym {

enum class ShapeDistance { Chamfer, Emd };

const char* to_string(ShapeDistance d);

struct PairwiseOptions {
  ShapeDistance distance = ShapeDistance::Chamfer;
  /// EMD is solved exactly up to this many points per shape, approximately
  /// above it. 0 always uses the approximate solver.
  std::size_t exact_emd_cap = kExactEmdCap;
  /// Relative tolerance handed to emd_approx.
  double emd_tolerance = 0.01;
  unsigned workers = 1;
};

/// Symmetric distance matrix (row-major, size n x n, zero diagonal) over
/// `shapes`. Only the upper triangle is evaluated. All shapes must have the
/// same point count.
std::vector<double> pairwise_distances(const std::vector<PointCloud>& shapes,
                                       const PairwiseOptions& options);

struct NearestNeighborRecord {
  std::size_t shape;      ///< index into the union (generated first, then reference)
  bool generated;
  std::size_t neighbor;   ///< nearest other shape in the union
  double distance;
  bool correct;           ///< neighbor belongs to the same set
};

struct NnaResult {
  double accuracy;                 ///< correct / total, 0.5 is ideal
  double generated_accuracy;       ///< fraction of generated shapes classified correctly
  double reference_accuracy;
  std::size_t correct;
  std::size_t total;
  std::vector<NearestNeighborRecord> nearest;
};

/// Leave-one-out 1-NN accuracy from a precomputed union distance matrix whose
/// first `n_generated` rows are generated shapes.
///
/// A shape is classified correctly when its nearest same-set distance is
/// strictly smaller than its nearest other-set distance; exact ties count as
/// incorrect. Nearest ties within a set go to the lowest index.
NnaResult one_nn_accuracy(const std::vector<double>& distances, std::size_t n_generated,
                          std::size_t n_reference);

/// Throws InvalidInput when either set is empty or the clouds differ in size.
NnaResult one_nn_accuracy(const std::vector<PointCloud>& generated,
                          const std::vector<PointCloud>& reference,
                          const PairwiseOptions& options);

}  // namespace halfsym
