#pragma once

#include <cstddef>
#include <vector>

#include <Eigen/Core>

#include "halfsym/features.hpp"

namespace halfsym {

/// Mean and unbiased (N - 1) covariance of a feature set.
struct GaussianSummary {
  Eigen::VectorXd mean;
  Eigen::MatrixXd covariance;
  std::size_t samples = 0;
};

/// Throws InvalidInput for fewer than two samples, ragged dimensions or
/// non-finite entries.
GaussianSummary fit_gaussian(const std::vector<FeatureVector>& features);

/// |mu1 - mu2|^2 + Tr(S1 + S2 - 2 (S1 S2)^{1/2}).
///
/// The trace of (S1 S2)^{1/2} is taken from the eigenvalues of the symmetric
/// matrix S1^{1/2} S2 S1^{1/2}, with negative eigenvalues clamped to zero at
/// both square roots. The result is clamped at zero.
double frechet_distance(const GaussianSummary& a, const GaussianSummary& b);

struct FpdResult {
  double value;
  std::size_t dimension;
  /// True when either set has fewer than D + 1 samples (singular covariance).
  bool undersampled;
};

FpdResult frechet_point_distance(const std::vector<FeatureVector>& f1,
                                 const std::vector<FeatureVector>& f2);

}  // namespace halfsym
