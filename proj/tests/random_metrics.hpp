#pragma once

#include "hmnc/seminorm.hpp"

#include <cmath>

namespace hmnc::testing {

enum class MetricKind { euclidean, integer_l1, seminorm };
inline constexpr MetricKind metric_kinds[] = {MetricKind::euclidean, MetricKind::integer_l1, MetricKind::seminorm};

// Points in the plane, points on a small integer grid (many ties), or random
// module vectors under the pseudometric of a random admissible pair.
inline Eigen::MatrixXd random_distance_matrix(Index n, MetricKind kind, Rng &rng)
{
  Eigen::MatrixXd d = Eigen::MatrixXd::Zero(n, n);
  switch (kind) {
  case MetricKind::euclidean: {
    Eigen::MatrixXd p(n, 2);
    for (Index i = 0; i < n; ++i)
      for (Index c = 0; c < 2; ++c)
        p(i, c) = gaussian<double>(rng);
    for (Index i = 0; i < n; ++i)
      for (Index j = i + 1; j < n; ++j)
        d(i, j) = d(j, i) = (p.row(i) - p.row(j)).norm();
    break;
  }
  case MetricKind::integer_l1: {
    std::uniform_int_distribution<int> coord(0, 3);
    std::vector<std::array<int, 2>> p(static_cast<std::size_t>(n));
    for (auto &q : p)
      q = {coord(rng), coord(rng)};
    for (Index i = 0; i < n; ++i)
      for (Index j = i + 1; j < n; ++j) {
        const auto &a = p[static_cast<std::size_t>(i)];
        const auto &b = p[static_cast<std::size_t>(j)];
        d(i, j) = d(j, i) = std::abs(a[0] - b[0]) + std::abs(a[1] - b[1]);
      }
    break;
  }
  case MetricKind::seminorm: {
    AlgebraShape shape{1, 2};
    auto pair = random_admissible_pair(shape, 4, 3, rng);
    std::vector<ModuleVector> pts;
    for (Index i = 0; i < n; ++i)
      pts.push_back(random_vector<cplx>(shape, 4, rng));
    d = distance_matrix(pair, pts);
    break;
  }
  }
  return d;
}

} // namespace hmnc::testing
