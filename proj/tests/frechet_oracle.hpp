#pragma once

#include <random>
#include <vector>

#include <Eigen/Cholesky>
#include <Eigen/Core>
#include <Eigen/Eigenvalues>

namespace oracle {

/// Closed-form Frechet distance. The trace of (S1 S2)^{1/2} is the sum of the
/// square roots of the eigenvalues of the (non-symmetric) product S1 S2, found
/// with a general eigensolver.
inline double frechet_closed_form(const Eigen::VectorXd& mu1, const Eigen::MatrixXd& s1,
                                  const Eigen::VectorXd& mu2, const Eigen::MatrixXd& s2) {
  Eigen::EigenSolver<Eigen::MatrixXd> eig(s1 * s2, false);
  double tr = 0.0;
  for (Eigen::Index i = 0; i < eig.eigenvalues().size(); ++i) {
    tr += std::sqrt(std::max(0.0, eig.eigenvalues()[i].real()));
  }
  return (mu1 - mu2).squaredNorm() + s1.trace() + s2.trace() - 2.0 * tr;
}

/// Random SPD matrix with eigenvalues in [lo, hi].
inline Eigen::MatrixXd random_spd(std::mt19937_64& rng, int dim, double lo, double hi) {
  std::normal_distribution<double> g;
  std::uniform_real_distribution<double> u(lo, hi);
  Eigen::MatrixXd a(dim, dim);
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) a(i, j) = g(rng);
  const Eigen::HouseholderQR<Eigen::MatrixXd> qr(a);
  const Eigen::MatrixXd q = qr.householderQ();
  Eigen::VectorXd lambda(dim);
  for (int i = 0; i < dim; ++i) lambda[i] = u(rng);
  return q * lambda.asDiagonal() * q.transpose();
}

/// n samples whose sample mean is exactly `mu` and whose unbiased sample
/// covariance is exactly `sigma` (up to round-off): Gaussian draws are
/// whitened against their own sample covariance, then coloured.
inline std::vector<Eigen::VectorXd> constructed_gaussian(std::mt19937_64& rng, std::size_t n,
                                                         const Eigen::VectorXd& mu,
                                                         const Eigen::MatrixXd& sigma) {
  const auto dim = mu.size();
  std::normal_distribution<double> g;
  Eigen::MatrixXd z(static_cast<Eigen::Index>(n), dim);
  for (Eigen::Index i = 0; i < z.rows(); ++i)
    for (Eigen::Index j = 0; j < dim; ++j) z(i, j) = g(rng);
  z.rowwise() -= z.colwise().mean();
  const Eigen::MatrixXd s = z.transpose() * z / double(n - 1);
  const Eigen::MatrixXd ls = Eigen::LLT<Eigen::MatrixXd>(s).matrixL();
  const Eigen::MatrixXd lt = Eigen::LLT<Eigen::MatrixXd>(sigma).matrixL();
  // rows: x = L_sigma L_s^{-1} z
  const Eigen::MatrixXd white = ls.triangularView<Eigen::Lower>().solve(z.transpose());
  const Eigen::MatrixXd x = (lt * white).colwise() + mu;
  std::vector<Eigen::VectorXd> out(n);
  for (std::size_t i = 0; i < n; ++i) out[i] = x.col(static_cast<Eigen::Index>(i));
  return out;
}

}  // namespace oracle
