#include "halfsym/nna.hpp"

#include <limits>
#include <memory>

#include <fmt/format.h>

#include "halfsym/chamfer.hpp"
#include "halfsym/emd.hpp"
#include "halfsym/error.hpp"
#include "halfsym/parallel.hpp"
#include "halfsym/spatial.hpp"

namespace halfsym {

namespace {

// Above this point count Chamfer uses k-d trees instead of the dense kernel.
constexpr std::size_t kDenseChamferMaxPoints = 512;

}  // namespace

const char* to_string(ShapeDistance d) { return d == ShapeDistance::Chamfer ? "CD" : "EMD"; }

std::vector<double> pairwise_distances(const std::vector<PointCloud>& shapes,
                                       const PairwiseOptions& options) {
  const std::size_t n = shapes.size();
  for (std::size_t i = 0; i < n; ++i) {
    require_non_empty(shapes[i], "pairwise_distances");
    if (shapes[i].size() != shapes[0].size()) {
      throw InvalidInput(fmt::format(
          "pairwise_distances: shape {} has {} points, expected {} (all shapes must share one "
          "resolution)",
          i, shapes[i].size(), shapes[0].size()));
    }
  }
  std::vector<double> matrix(n * n, 0.0);
  if (n == 0) return matrix;

  std::vector<PackedCloud> packed;
  std::vector<std::unique_ptr<NeighborIndex>> indices;
  const bool chamfer = options.distance == ShapeDistance::Chamfer;
  const bool dense = shapes[0].size() <= kDenseChamferMaxPoints;
  const bool exact = shapes[0].size() <= options.exact_emd_cap;
  if (chamfer && dense) {
    packed.reserve(n);
    for (const auto& s : shapes) packed.emplace_back(s);
  } else if (chamfer) {
    indices.resize(n);
    parallel_for(n, options.workers,
                 [&](std::size_t i) { indices[i] = std::make_unique<NeighborIndex>(shapes[i]); });
  }

  parallel_for(n, options.workers, [&](std::size_t i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      double d;
      if (!chamfer) {
        d = exact ? emd_exact(shapes[i], shapes[j], options.exact_emd_cap)
                  : emd_approx(shapes[i], shapes[j], options.emd_tolerance);
      } else if (dense) {
        d = chamfer_distance_dense(packed[i], packed[j]);
      } else {
        d = chamfer_distance(shapes[i], *indices[i], shapes[j], *indices[j]);
      }
      matrix[i * n + j] = d;
      matrix[j * n + i] = d;
    }
  });
  return matrix;
}

NnaResult one_nn_accuracy(const std::vector<double>& distances, std::size_t n_generated,
                          std::size_t n_reference) {
  const std::size_t n = n_generated + n_reference;
  if (n_generated == 0 || n_reference == 0) {
    throw InvalidInput("one_nn_accuracy: both sets must be non-empty");
  }
  if (n < 2) throw InvalidInput("one_nn_accuracy: union must hold at least two shapes");
  if (distances.size() != n * n) throw InvalidInput("one_nn_accuracy: distance matrix size mismatch");

  constexpr double kInf = std::numeric_limits<double>::infinity();
  NnaResult result{};
  result.total = n;
  std::size_t correct_gen = 0;
  std::size_t correct_ref = 0;
  result.nearest.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    const bool gen_i = i < n_generated;
    double same = kInf, other = kInf;
    std::size_t same_j = n, other_j = n;
    for (std::size_t j = 0; j < n; ++j) {
      if (j == i) continue;
      const double d = distances[i * n + j];
      if ((j < n_generated) == gen_i) {
        if (d < same) same = d, same_j = j;
      } else if (d < other) {
        other = d, other_j = j;
      }
    }
    const bool correct = same < other;
    const std::size_t nb = correct ? same_j : other_j;
    result.nearest.push_back({i, gen_i, nb, correct ? same : other, correct});
    if (correct) (gen_i ? correct_gen : correct_ref)++;
  }
  result.correct = correct_gen + correct_ref;
  result.accuracy = static_cast<double>(result.correct) / static_cast<double>(n);
  result.generated_accuracy = static_cast<double>(correct_gen) / static_cast<double>(n_generated);
  result.reference_accuracy = static_cast<double>(correct_ref) / static_cast<double>(n_reference);
  return result;
}

NnaResult one_nn_accuracy(const std::vector<PointCloud>& generated,
                          const std::vector<PointCloud>& reference,
                          const PairwiseOptions& options) {
  if (generated.empty() || reference.empty()) {
    throw InvalidInput("one_nn_accuracy: both sets must be non-empty");
  }
  std::vector<PointCloud> all;
  all.reserve(generated.size() + reference.size());
  all.insert(all.end(), generated.begin(), generated.end());
  all.insert(all.end(), reference.begin(), reference.end());
  return one_nn_accuracy(pairwise_distances(all, options), generated.size(), reference.size());
}

}  // namespace halfsym
