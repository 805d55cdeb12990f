#include "halfsym/frechet.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Eigenvalues>
#include <fmt/format.h>

#include "halfsym/error.hpp"

namespace halfsym {

namespace {

Eigen::MatrixXd psd_sqrt(const Eigen::MatrixXd& m) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(m);
  const Eigen::VectorXd roots = eig.eigenvalues().cwiseMax(0.0).cwiseSqrt();
  return eig.eigenvectors() * roots.asDiagonal() * eig.eigenvectors().transpose();
}

}  // namespace

GaussianSummary fit_gaussian(const std::vector<FeatureVector>& features) {
  if (features.size() < 2) throw InvalidInput("fit_gaussian: need at least two samples");
  const Eigen::Index dim = features.front().size();
  if (dim == 0) throw InvalidInput("fit_gaussian: empty feature vectors");
  Eigen::MatrixXd x(static_cast<Eigen::Index>(features.size()), dim);
  for (std::size_t i = 0; i < features.size(); ++i) {
    const auto& f = features[i];
    if (f.size() != dim) {
      throw InvalidInput(
          fmt::format("fit_gaussian: sample {} has dimension {}, expected {}", i, f.size(), dim));
    }
    if (!f.allFinite()) throw InvalidInput(fmt::format("fit_gaussian: sample {} is not finite", i));
    x.row(static_cast<Eigen::Index>(i)) = f.transpose();
  }
  GaussianSummary g;
  g.samples = features.size();
  g.mean = x.colwise().mean().transpose();
  x.rowwise() -= g.mean.transpose();
  g.covariance = (x.transpose() * x) / static_cast<double>(features.size() - 1);
  g.covariance = 0.5 * (g.covariance + g.covariance.transpose());
  return g;
}

double frechet_distance(const GaussianSummary& a, const GaussianSummary& b) {
  if (a.mean.size() != b.mean.size()) {
    throw InvalidInput(fmt::format("frechet_distance: dimension mismatch ({} vs {})",
                                   a.mean.size(), b.mean.size()));
  }
  const Eigen::MatrixXd a_half = psd_sqrt(a.covariance);
  Eigen::MatrixXd inner = a_half * b.covariance * a_half;
  inner = 0.5 * (inner + inner.transpose());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(inner, Eigen::EigenvaluesOnly);
  const double trace_sqrt = eig.eigenvalues().cwiseMax(0.0).cwiseSqrt().sum();
  const double value = (a.mean - b.mean).squaredNorm() + a.covariance.trace() +
                       b.covariance.trace() - 2.0 * trace_sqrt;
  return std::max(0.0, value);
}

FpdResult frechet_point_distance(const std::vector<FeatureVector>& f1,
                                 const std::vector<FeatureVector>& f2) {
  const GaussianSummary a = fit_gaussian(f1);
  const GaussianSummary b = fit_gaussian(f2);
  const auto dim = static_cast<std::size_t>(a.mean.size());
  const bool undersampled = f1.size() < dim + 1 || f2.size() < dim + 1;
  return {frechet_distance(a, b), dim, undersampled};
}

}  // namespace halfsym
