#pragma once

// m-indexed covering, separation and partition profiles of finite point sets
// under a pseudometric given as a symmetric distance matrix.
//
//   r_m  smallest radius such that m balls centered at points cover the set
//   s_m  largest ε admitting m points with pairwise distance ≥ ε
//   D_m  smallest achievable max part diameter over partitions into ≤ m parts
//
// Exact values are computed by binary search over the distinct matrix entries
// with a branch-and-bound decision procedure, so they are matrix entries and
// compare bitwise against brute-force enumeration. Greedy values use
// farthest-point traversal from point 0 with ties broken toward the lowest index.

#include "hmnc/linalg.hpp"

#include <functional>
#include <span>

namespace hmnc {

enum class SolveMode { exact, greedy, automatic };

struct SolverLimits {
  // Bitmask representation bounds the exact solvers.
  Index max_points = 64;
  long long node_budget = 2'000'000;
};

struct Solution {
  double value = 0;
  bool exact = false;
  // Covering: centers attaining the radius. Separation: the separated subset.
  // Empty for partitions.
  std::vector<Index> points;
};

Solution covering_radius(const Eigen::MatrixXd &distances, Index m, SolveMode mode = SolveMode::automatic,
                         const SolverLimits &limits = {});

Solution separation_number(const Eigen::MatrixXd &distances, Index m, SolveMode mode = SolveMode::automatic,
                           const SolverLimits &limits = {});

Solution partition_diameter(const Eigen::MatrixXd &distances, Index m, SolveMode mode = SolveMode::automatic,
                            const SolverLimits &limits = {});

/// First m points of the farthest-point traversal (fewer if the set is smaller).
std::vector<Index> farthest_point_order(const Eigen::MatrixXd &distances, Index m);

template <class Point>
Eigen::MatrixXd pairwise_distances(std::span<const Point> points,
                                   const std::function<double(const Point &, const Point &)> &metric)
{
  const Index n = static_cast<Index>(points.size());
  Eigen::MatrixXd d = Eigen::MatrixXd::Zero(n, n);
  for (Index i = 0; i < n; ++i)
    for (Index j = i + 1; j < n; ++j)
      d(i, j) = d(j, i) = metric(points[static_cast<std::size_t>(i)], points[static_cast<std::size_t>(j)]);
  return d;
}

const char *to_string(SolveMode mode);
SolveMode solve_mode_from_string(const std::string &name);

} // namespace hmnc
