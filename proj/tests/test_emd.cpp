#include <doctest.h>

#include <random>

#include "halfsym/emd.hpp"
#include "halfsym/error.hpp"
#include "oracles.hpp"

using namespace halfsym;

TEST_CASE("assignment on a small matrix") {
  // Optimal: row0->col1 (1), row1->col0 (2), row2->col2 (2).
  const std::vector<double> cost = {4, 1, 3, 2, 0, 5, 3, 2, 2};
  CHECK(solve_assignment(cost, 3) == std::vector<std::size_t>{1, 0, 2});
  CHECK_THROWS_AS(solve_assignment(cost, 2), InvalidInput);
}

TEST_CASE("emd examples") {
  const PointCloud a(std::vector<Vec3>{{0, 0, 0}, {1, 0, 0}});
  const PointCloud b(std::vector<Vec3>{{0, 1, 0}, {1, 1, 0}});
  CHECK(emd_exact(a, b) == 1.0);
  CHECK(oracle::emd_permutations(a, b) == 1.0);
  CHECK(emd_exact(a, a) == 0.0);
  CHECK(emd_approx(a, a) == doctest::Approx(0.0).epsilon(1e-9));
}

TEST_CASE("emd errors") {
  const PointCloud two(std::vector<Vec3>{{0, 0, 0}, {1, 0, 0}});
  const PointCloud one(std::vector<Vec3>{{0, 0, 0}});
  CHECK_THROWS_AS(emd_exact(two, one), InvalidInput);
  CHECK_THROWS_AS(emd_approx(two, one), InvalidInput);
  CHECK_THROWS_AS(emd_exact(PointCloud{}, PointCloud{}), InvalidInput);
  CHECK_THROWS_AS(emd_exact(two, two, 1), TooLarge);
  CHECK_THROWS_AS(emd_approx(two, two, 0.0), InvalidInput);

  std::mt19937_64 rng(3);
  const PointCloud big = oracle::random_cloud(rng, kExactEmdCap + 1);
  CHECK_THROWS_AS(emd_exact(big, big), TooLarge);
}

TEST_CASE("exact solver matches permutation enumeration") {
  std::mt19937_64 rng(41);
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t n = 1 + rng() % 8;
    const PointCloud a = oracle::random_cloud(rng, n);
    const PointCloud b = oracle::random_cloud(rng, n);
    CHECK(emd_exact(a, b) == doctest::Approx(oracle::emd_permutations(a, b)).epsilon(1e-12));
  }
}

TEST_CASE("exact EMD is a metric on equal-size multisets") {
  std::mt19937_64 rng(43);
  for (int trial = 0; trial < 30; ++trial) {
    const std::size_t n = 1 + rng() % 16;
    const PointCloud a = oracle::random_cloud(rng, n);
    const PointCloud b = oracle::random_cloud(rng, n);
    const PointCloud c = oracle::random_cloud(rng, n);
    const double ab = emd_exact(a, b), bc = emd_exact(b, c), ac = emd_exact(a, c);
    CHECK(ac <= ab + bc + 1e-12);
    CHECK(ab == doctest::Approx(emd_exact(b, a)).epsilon(1e-12));
    CHECK(ab > 0.0);
    // Reordering a multiset does not change it.
    std::vector<Vec3> rev(a.begin(), a.end());
    std::reverse(rev.begin(), rev.end());
    CHECK(emd_exact(a, PointCloud(rev)) == 0.0);
  }
}

TEST_CASE("approximate EMD stays within tolerance of the exact solver") {
  std::mt19937_64 rng(47);
  for (std::size_t n : {16, 64, 128}) {
    for (int trial = 0; trial < 10; ++trial) {
      const PointCloud a = oracle::random_cloud(rng, n);
      const PointCloud b = oracle::random_cloud(rng, n, 0.8);
      const double exact = emd_exact(a, b);
      const auto r = emd_approx_detailed(a, b);
      CHECK(r.value >= exact - 1e-12);
      CHECK(r.value <= exact * 1.01);
      CHECK(r.lower_bound <= exact + 1e-12);
      CHECK(r.gap <= 0.01);
      CHECK(r.matching.size() == n);
    }
  }
}

TEST_CASE("translation costs exactly the offset") {
  std::mt19937_64 rng(53);
  const PointCloud a = oracle::random_cloud(rng, 64);
  for (double d : {0.05, 0.5, 2.0}) {
    std::vector<Vec3> moved;
    for (const auto& p : a) moved.push_back(p + Vec3(d, 0, 0));
    const PointCloud b(moved);
    CHECK(emd_exact(a, b) == doctest::Approx(d).epsilon(1e-12));
    const double approx = emd_approx(a, b, 0.01);
    CHECK(approx >= d - 1e-12);
    CHECK(approx <= d * 1.01);
  }
}

TEST_CASE("approximate EMD is deterministic and reports non-convergence") {
  std::mt19937_64 rng(59);
  const PointCloud a = oracle::random_cloud(rng, 48);
  const PointCloud b = oracle::random_cloud(rng, 48);
  CHECK(emd_approx(a, b, 0.005) == emd_approx(a, b, 0.005));

  EmdApproxOptions tight;
  tight.tolerance = 1e-9;
  tight.max_iterations = 3;
  try {
    emd_approx_detailed(a, b, tight);
    FAIL("expected ConvergenceError");
  } catch (const ConvergenceError& e) {
    CHECK(e.gap() > 1e-9);
  }
}
