#include "halfsym/emd.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include <fmt/format.h>

#include "halfsym/error.hpp"

namespace halfsym {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void check_pair(const PointCloud& s1, const PointCloud& s2, const char* what) {
  require_non_empty(s1, what);
  require_non_empty(s2, what);
  if (s1.size() != s2.size()) {
    throw InvalidInput(
        fmt::format("{}: clouds must have equal size ({} vs {})", what, s1.size(), s2.size()));
  }
}

std::vector<double> distance_matrix(const PointCloud& s1, const PointCloud& s2) {
  const std::size_t n = s1.size();
  std::vector<double> cost(n * n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) cost[i * n + j] = (s1[i] - s2[j]).norm();
  }
  return cost;
}

double matching_cost(std::span<const double> cost, std::size_t n,
                     const std::vector<std::size_t>& match) {
  double sum = 0.0;
  for (std::size_t i = 0; i < n; ++i) sum += cost[i * n + match[i]];
  return sum / static_cast<double>(n);
}

}  // namespace

std::vector<std::size_t> solve_assignment(std::span<const double> cost, std::size_t n) {
  if (cost.size() != n * n) throw InvalidInput("solve_assignment: cost matrix is not n x n");
  // 1-based rows/columns; column 0 is the virtual source of each augmentation.
  std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0), min_v(n + 1);
  std::vector<std::size_t> row_of(n + 1, 0), way(n + 1, 0);
  std::vector<char> used(n + 1);

  for (std::size_t i = 1; i <= n; ++i) {
    row_of[0] = i;
    std::size_t j0 = 0;
    std::fill(min_v.begin(), min_v.end(), kInf);
    std::fill(used.begin(), used.end(), 0);
    do {
      used[j0] = 1;
      const std::size_t i0 = row_of[j0];
      const double* row = &cost[(i0 - 1) * n];
      double delta = kInf;
      std::size_t j1 = 0;
      for (std::size_t j = 1; j <= n; ++j) {
        if (used[j]) continue;
        const double reduced = row[j - 1] - u[i0] - v[j];
        if (reduced < min_v[j]) {
          min_v[j] = reduced;
          way[j] = j0;
        }
        if (min_v[j] < delta) {
          delta = min_v[j];
          j1 = j;
        }
      }
      for (std::size_t j = 0; j <= n; ++j) {
        if (used[j]) {
          u[row_of[j]] += delta;
          v[j] -= delta;
        } else {
          min_v[j] -= delta;
        }
      }
      j0 = j1;
    } while (row_of[j0] != 0);
    do {
      const std::size_t j1 = way[j0];
      row_of[j0] = row_of[j1];
      j0 = j1;
    } while (j0 != 0);
  }

  std::vector<std::size_t> assignment(n);
  for (std::size_t j = 1; j <= n; ++j) assignment[row_of[j] - 1] = j - 1;
  return assignment;
}

double emd_exact(const PointCloud& s1, const PointCloud& s2, std::size_t cap) {
  check_pair(s1, s2, "emd_exact");
  if (s1.size() > cap) {
    throw TooLarge(fmt::format(
        "emd_exact: {} points exceeds the exact-solver cap of {}; use emd_approx", s1.size(), cap));
  }
  const std::size_t n = s1.size();
  const auto cost = distance_matrix(s1, s2);
  return matching_cost(cost, n, solve_assignment(cost, n));
}

namespace {

// Log-domain Sinkhorn state for uniform marginals 1/n.
class SinkhornSolver {
public:
  SinkhornSolver(std::vector<double> cost, std::size_t n)
      : cost_(std::move(cost)), cost_t_(n * n), n_(n), f_(n, 0.0), g_(n, 0.0), scratch_(n) {
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) cost_t_[j * n + i] = cost_[i * n + j];
  }

  // One sweep: update f then g. Returns the L1 row-marginal violation of the
  // plan as it stood before the sweep; with f fixed, row i carries mass
  // w * exp((f_old - f_new) / eps), so this costs nothing extra.
  double sweep(double eps) {
    const double log_w = -std::log(static_cast<double>(n_));
    const double w = 1.0 / static_cast<double>(n_);
    double violation = 0.0;
    for (std::size_t i = 0; i < n_; ++i) {
      const double* row = &cost_[i * n_];
      for (std::size_t j = 0; j < n_; ++j) scratch_[j] = (g_[j] - row[j]) / eps;
      const double updated = eps * (log_w - log_sum_exp());
      violation += std::abs(w * std::exp((f_[i] - updated) / eps) - w);
      f_[i] = updated;
    }
    for (std::size_t j = 0; j < n_; ++j) {
      const double* col = &cost_t_[j * n_];
      for (std::size_t i = 0; i < n_; ++i) scratch_[i] = (f_[i] - col[i]) / eps;
      g_[j] = eps * (log_w - log_sum_exp());
    }
    return violation;
  }

  // Greedy rounding of the plan: rows with the most confident entry pick
  // first, each taking its highest-scoring free column.
  std::vector<std::size_t> round() const {
    std::vector<double> best(n_, -kInf);
    for (std::size_t i = 0; i < n_; ++i) {
      const double* row = &cost_[i * n_];
      for (std::size_t j = 0; j < n_; ++j) best[i] = std::max(best[i], f_[i] + g_[j] - row[j]);
    }
    std::vector<std::size_t> order(n_);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return best[a] > best[b]; });

    std::vector<char> taken(n_, 0);
    std::vector<std::size_t> match(n_);
    for (std::size_t i : order) {
      const double* row = &cost_[i * n_];
      std::size_t pick = n_;
      double pick_score = -kInf;
      for (std::size_t j = 0; j < n_; ++j) {
        if (taken[j]) continue;
        const double s = g_[j] - row[j];
        if (pick == n_ || s > pick_score) {
          pick = j;
          pick_score = s;
        }
      }
      taken[pick] = 1;
      match[i] = pick;
    }
    return match;
  }

  // Objective of the c-transformed (hence feasible) dual pair built from f.
  double dual_bound() const {
    std::vector<double> g(n_, kInf), f(n_, kInf);
    for (std::size_t i = 0; i < n_; ++i) {
      const double* row = &cost_[i * n_];
      for (std::size_t j = 0; j < n_; ++j) g[j] = std::min(g[j], row[j] - f_[i]);
    }
    for (std::size_t i = 0; i < n_; ++i) {
      const double* row = &cost_[i * n_];
      for (std::size_t j = 0; j < n_; ++j) f[i] = std::min(f[i], row[j] - g[j]);
    }
    double sum = 0.0;
    for (std::size_t k = 0; k < n_; ++k) sum += f[k] + g[k];
    return sum / static_cast<double>(n_);
  }

  const std::vector<double>& cost() const { return cost_; }

private:
  double log_sum_exp() const {
    const double m = *std::max_element(scratch_.begin(), scratch_.end());
    double s = 0.0;
    for (double x : scratch_) s += std::exp(x - m);
    return m + std::log(s);
  }

  std::vector<double> cost_;
  std::vector<double> cost_t_;
  std::size_t n_;
  std::vector<double> f_, g_;
  mutable std::vector<double> scratch_;
};

}  // namespace

EmdApproxResult emd_approx_detailed(const PointCloud& s1, const PointCloud& s2,
                                    const EmdApproxOptions& options) {
  check_pair(s1, s2, "emd_approx");
  if (!(options.tolerance > 0.0)) throw InvalidInput("emd_approx: tolerance must be positive");
  if (!(options.epsilon_decay > 0.0 && options.epsilon_decay < 1.0)) {
    throw InvalidInput("emd_approx: epsilon_decay must lie in (0, 1)");
  }
  const std::size_t n = s1.size();
  SinkhornSolver solver(distance_matrix(s1, s2), n);
  const auto& cost = solver.cost();

  const double max_cost = *std::max_element(cost.begin(), cost.end());
  std::vector<std::size_t> identity(n);
  std::iota(identity.begin(), identity.end(), std::size_t{0});
  if (max_cost == 0.0) return {0.0, 0.0, 0.0, 0.0, 0, identity};

  double eps = max_cost;
  std::size_t iterations = 0;
  double best_gap = kInf;
  while (iterations < options.max_iterations) {
    for (std::size_t k = 0; k < options.stage_iterations && iterations < options.max_iterations;
         ++k) {
      ++iterations;
      if (solver.sweep(eps) <= 1e-4) break;
    }
    auto match = solver.round();
    const double value = matching_cost(cost, n, match);
    if (value == 0.0) return {0.0, 0.0, 0.0, eps, iterations, std::move(match)};
    const double bound = solver.dual_bound();
    const double gap = bound > 0.0 ? (value - bound) / bound : kInf;
    best_gap = std::min(best_gap, gap);
    if (gap <= options.tolerance) return {value, bound, gap, eps, iterations, std::move(match)};
    eps *= options.epsilon_decay;
  }
  throw ConvergenceError(
      fmt::format("emd_approx: relative gap {} above tolerance {} after {} iterations", best_gap,
                  options.tolerance, iterations),
      best_gap);
}

double emd_approx(const PointCloud& s1, const PointCloud& s2, double tolerance) {
  EmdApproxOptions options;
  options.tolerance = tolerance;
  return emd_approx_detailed(s1, s2, options).value;
}

}  // namespace halfsym
