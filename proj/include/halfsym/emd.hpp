#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "halfsym/point_cloud.hpp"

namespace halfsym {

/// Minimum-cost perfect matching on a dense n x n cost matrix (row-major).
///
/// Shortest augmenting path with dual potentials, O(n^3). Returns
/// `assignment[row] = column`.
std::vector<std::size_t> solve_assignment(std::span<const double> cost, std::size_t n);

/// Default size cap for `emd_exact`.
inline constexpr std::size_t kExactEmdCap = 1024;

/// Earth Mover's Distance between equal-size clouds: the minimum over
/// bijections of the mean unsquared Euclidean distance between matched points.
///
/// Throws InvalidInput on empty or mismatched sizes and TooLarge above `cap`.
double emd_exact(const PointCloud& s1, const PointCloud& s2, std::size_t cap = kExactEmdCap);

struct EmdApproxOptions {
  /// Accept once (matching cost - dual bound) / dual bound <= tolerance.
  double tolerance = 0.01;
  /// Total Sinkhorn sweeps across all annealing stages.
  std::size_t max_iterations = 20000;
  /// Sweeps per annealing stage before epsilon is reduced anyway.
  std::size_t stage_iterations = 200;
  /// Epsilon is multiplied by this after every stage.
  double epsilon_decay = 0.5;
};

struct EmdApproxResult {
  double value;        ///< mean cost of the rounded matching (an upper bound)
  double lower_bound;  ///< feasible dual objective (<= exact EMD)
  double gap;          ///< relative gap (value - lower_bound) / lower_bound
  double epsilon;      ///< regularization at termination
  std::size_t iterations;
  std::vector<std::size_t> matching;
};

/// Entropic-regularized transport with epsilon annealing. After each stage the
/// transport plan is rounded to a permutation and compared against a dual lower
/// bound; the loop stops when the relative gap is within tolerance, so the
/// returned value satisfies emd_exact <= value <= (1 + tolerance) * emd_exact.
///
/// Throws ConvergenceError carrying the best gap if the budget runs out.
EmdApproxResult emd_approx_detailed(const PointCloud& s1, const PointCloud& s2,
                                    const EmdApproxOptions& options = {});

double emd_approx(const PointCloud& s1, const PointCloud& s2, double tolerance = 0.01);

}  // namespace halfsym
