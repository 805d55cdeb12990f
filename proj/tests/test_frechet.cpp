#include <doctest.h>

#include <random>

#include <Eigen/QR>

#include "frechet_oracle.hpp"
#include "halfsym/error.hpp"
#include "halfsym/frechet.hpp"

using namespace halfsym;

TEST_CASE("identical sets have zero distance") {
  std::mt19937_64 rng(1);
  const auto sigma = oracle::random_spd(rng, 16, 0.1, 2.0);
  const auto f = oracle::constructed_gaussian(rng, 500, Eigen::VectorXd::Zero(16), sigma);
  const auto r = frechet_point_distance(f, f);
  CHECK(r.value <= 1e-6);
  CHECK(r.value >= 0.0);
  CHECK(r.dimension == 16);
  CHECK_FALSE(r.undersampled);
}

TEST_CASE("a unit shift of one coordinate costs 1") {
  std::mt19937_64 rng(2);
  const auto sigma = oracle::random_spd(rng, 8, 0.5, 1.5);
  const auto f1 = oracle::constructed_gaussian(rng, 5000, Eigen::VectorXd::Zero(8), sigma);
  auto f2 = f1;
  for (auto& v : f2) v[3] += 1.0;
  CHECK(frechet_point_distance(f1, f2).value == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("fitted summaries reproduce constructed moments") {
  std::mt19937_64 rng(3);
  Eigen::VectorXd mu = Eigen::VectorXd::LinSpaced(5, -1.0, 1.0);
  const auto sigma = oracle::random_spd(rng, 5, 0.2, 3.0);
  const auto g = fit_gaussian(oracle::constructed_gaussian(rng, 200, mu, sigma));
  CHECK((g.mean - mu).cwiseAbs().maxCoeff() < 1e-12);
  CHECK((g.covariance - sigma).cwiseAbs().maxCoeff() < 1e-10);
  CHECK((g.covariance - g.covariance.transpose()).cwiseAbs().maxCoeff() == 0.0);
  CHECK(g.samples == 200);
}

TEST_CASE("matches the closed form on constructed Gaussians") {
  std::mt19937_64 rng(4);
  for (int trial = 0; trial < 5; ++trial) {
    Eigen::VectorXd mu1(16), mu2(16);
    std::normal_distribution<double> g;
    for (int i = 0; i < 16; ++i) mu1[i] = g(rng), mu2[i] = g(rng);
    const auto s1 = oracle::random_spd(rng, 16, 0.1, 2.0);
    const auto s2 = oracle::random_spd(rng, 16, 0.1, 2.0);
    const auto f1 = oracle::constructed_gaussian(rng, 10000, mu1, s1);
    const auto f2 = oracle::constructed_gaussian(rng, 10000, mu2, s2);
    const double want = oracle::frechet_closed_form(mu1, s1, mu2, s2);
    CHECK(std::abs(frechet_point_distance(f1, f2).value - want) <= 1e-4);
  }
}

TEST_CASE("commuting covariances reduce to per-eigenvalue terms") {
  std::mt19937_64 rng(5);
  const auto basis = oracle::random_spd(rng, 4, 1.0, 2.0);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(basis);
  const Eigen::MatrixXd q = eig.eigenvectors();
  const Eigen::Vector4d a(1.0, 2.0, 0.5, 4.0), b(4.0, 0.5, 0.5, 1.0);
  GaussianSummary ga{Eigen::VectorXd::Zero(4), q * a.asDiagonal() * q.transpose(), 100};
  GaussianSummary gb{Eigen::VectorXd::Ones(4), q * b.asDiagonal() * q.transpose(), 100};
  double want = 4.0;  // |mu1 - mu2|^2
  for (int i = 0; i < 4; ++i) want += a[i] + b[i] - 2.0 * std::sqrt(a[i] * b[i]);
  CHECK(frechet_distance(ga, gb) == doctest::Approx(want).epsilon(1e-12));
}

TEST_CASE("rank-deficient covariances are clamped, never negative") {
  std::vector<FeatureVector> f1, f2;
  for (int i = 0; i < 5; ++i) {
    f1.push_back(Eigen::Vector3d(i, 2.0 * i, 0.0));
    f2.push_back(Eigen::Vector3d(i, 2.0 * i, 0.0));
  }
  const auto r = frechet_point_distance(f1, f2);
  CHECK(r.value >= 0.0);
  CHECK(r.value <= 1e-9);
  CHECK_FALSE(r.undersampled);

  std::vector<FeatureVector> few(3, Eigen::VectorXd::Zero(63));
  few[1][0] = 1.0;
  CHECK(frechet_point_distance(few, few).undersampled);
}

TEST_CASE("invalid inputs") {
  std::vector<FeatureVector> a(3, Eigen::Vector3d(1, 2, 3));
  std::vector<FeatureVector> b(3, Eigen::Vector2d(1, 2));
  CHECK_THROWS_AS(frechet_point_distance(a, b), InvalidInput);
  auto bad = a;
  bad[1][2] = std::numeric_limits<double>::quiet_NaN();
  CHECK_THROWS_AS(frechet_point_distance(a, bad), InvalidInput);
  CHECK_THROWS_AS(fit_gaussian({a[0]}), InvalidInput);
  auto ragged = a;
  ragged[2] = Eigen::Vector2d(0, 0);
  CHECK_THROWS_AS(fit_gaussian(ragged), InvalidInput);
}
