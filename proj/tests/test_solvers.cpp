#include "doctest.h"
#include "hmnc/oracle.hpp"
#include "hmnc/solvers.hpp"
#include "random_metrics.hpp"
#include "test_support.hpp"

#include <array>

using namespace hmnc;
using namespace hmnc::testing;

namespace {

Eigen::MatrixXd line_distances(std::vector<double> xs)
{
  std::vector<ModuleVector> pts;
  for (double x : xs)
    pts.push_back(scalar_vector({x}));
  std::function<double(const ModuleVector &, const ModuleVector &)> metric =
      [](const ModuleVector &a, const ModuleVector &b) { return vec_norm(a - b); };
  return pairwise_distances<ModuleVector>(pts, metric);
}

} // namespace

TEST_CASE("three points on a line")
{
  auto d = line_distances({0, 1, 3});
  for (auto mode : {SolveMode::exact, SolveMode::automatic}) {
    CHECK(covering_radius(d, 1, mode).value == 2.0);
    CHECK(covering_radius(d, 2, mode).value == 1.0);
    CHECK(covering_radius(d, 3, mode).value == 0.0);
    CHECK(separation_number(d, 2, mode).value == 3.0);
    CHECK(separation_number(d, 3, mode).value == 1.0);
    CHECK(partition_diameter(d, 1, mode).value == 3.0);
    CHECK(partition_diameter(d, 2, mode).value == 1.0);
    CHECK(partition_diameter(d, 3, mode).value == 0.0);
  }
  CHECK(covering_radius(d, 1, SolveMode::exact).exact);
  CHECK_FALSE(covering_radius(d, 1, SolveMode::greedy).exact);
}

TEST_CASE("degenerate inputs")
{
  auto single = line_distances({2});
  CHECK(covering_radius(single, 1).value == 0.0);
  CHECK(covering_radius(single, 3).value == 0.0);
  CHECK(partition_diameter(single, 1).value == 0.0);
  CHECK(separation_number(line_distances({1, 1}), 2).value == 0.0);

  CHECK_THROWS_AS(covering_radius(Eigen::MatrixXd(0, 0), 1), PreconditionError);
  CHECK_THROWS_AS(covering_radius(single, 0), PreconditionError);
  CHECK_THROWS_AS(separation_number(single, 2), PreconditionError);
  CHECK_THROWS_AS(covering_radius(Eigen::MatrixXd::Zero(2, 3), 1), ShapeError);
}

TEST_CASE("farthest-point traversal breaks ties toward the lowest index")
{
  Eigen::MatrixXd d = Eigen::MatrixXd::Ones(5, 5);
  d.diagonal().setZero();
  CHECK(farthest_point_order(d, 3) == std::vector<Index>{0, 1, 2});
  auto line = line_distances({0, 1, 3, -3});
  // From 0 the farthest are 3 and −3 (tie → index 2), then −3.
  CHECK(farthest_point_order(line, 3) == std::vector<Index>{0, 2, 3});
}

TEST_CASE("exact solvers agree with enumeration")
{
  Rng rng(31);
  int checked = 0;
  for (int t = 0; t < 150; ++t)
    for (auto kind : metric_kinds) {
      std::uniform_int_distribution<Index> size(1, 16);
      Index n = size(rng);
      auto d = random_distance_matrix(n, kind, rng);
      for (Index m = 1; m <= 4; ++m) {
        CHECK(covering_radius(d, m, SolveMode::exact).value == oracle::exact_cover_radius(d, m));
        if (m >= 2 && m <= n)
          CHECK(separation_number(d, m, SolveMode::exact).value == oracle::exact_separation_number(d, m));
        if (n <= 10)
          CHECK(partition_diameter(d, m, SolveMode::exact).value == oracle::exact_partition_diameter(d, m));
        ++checked;
      }
    }
  CHECK(checked == 1800);
}

TEST_CASE("greedy approximation guarantees")
{
  Rng rng(32);
  for (int t = 0; t < 100; ++t)
    for (auto kind : metric_kinds) {
      Index n = 2 + t % 15;
      auto d = random_distance_matrix(n, kind, rng);
      for (Index m = 1; m <= 4; ++m) {
        double exact = covering_radius(d, m, SolveMode::exact).value;
        double greedy = covering_radius(d, m, SolveMode::greedy).value;
        CHECK(exact <= greedy);
        CHECK(greedy <= 2 * exact + 1e-12);
        double part = partition_diameter(d, m, SolveMode::greedy).value;
        CHECK(partition_diameter(d, m, SolveMode::exact).value <= part);
        CHECK(part <= 2 * greedy + 1e-12);
        if (m >= 2 && m <= n)
          CHECK(separation_number(d, m, SolveMode::greedy).value <= separation_number(d, m, SolveMode::exact).value);
      }
    }
}

TEST_CASE("surrogate chain beyond the oracle budget")
{
  Rng rng(33);
  for (int t = 0; t < 6; ++t)
    for (auto kind : metric_kinds) {
      auto d = random_distance_matrix(40, kind, rng);
      for (Index m = 1; m <= 8; ++m) {
        auto r = covering_radius(d, m, SolveMode::exact);
        auto part = partition_diameter(d, m, SolveMode::automatic);
        CHECK(r.exact);
        CHECK(r.value <= covering_radius(d, m, SolveMode::greedy).value);
        if (part.exact) {
          CHECK(r.value <= part.value);
          CHECK(part.value <= 2 * r.value + 1e-10);
        }
        if (m >= 2) {
          double s = separation_number(d, m, SolveMode::exact).value;
          CHECK(covering_radius(d, m - 1, SolveMode::exact).value >= s / 2 - 1e-10);
        }
      }
    }
}

TEST_CASE("size limits")
{
  Rng rng(34);
  auto d = random_distance_matrix(70, MetricKind::euclidean, rng);
  CHECK_THROWS_AS(covering_radius(d, 3, SolveMode::exact), BudgetExceeded);
  auto fallback = covering_radius(d, 3, SolveMode::automatic);
  CHECK_FALSE(fallback.exact);
  CHECK(fallback.value == covering_radius(d, 3, SolveMode::greedy).value);

  SolverLimits tight;
  tight.node_budget = 3;
  auto small = random_distance_matrix(12, MetricKind::euclidean, rng);
  CHECK_THROWS_AS(partition_diameter(small, 3, SolveMode::exact, tight), BudgetExceeded);
  CHECK_FALSE(partition_diameter(small, 3, SolveMode::automatic, tight).exact);
}

TEST_CASE("solve mode names")
{
  for (auto mode : {SolveMode::exact, SolveMode::greedy, SolveMode::automatic})
    CHECK(solve_mode_from_string(to_string(mode)) == mode);
  CHECK_THROWS_AS(solve_mode_from_string("fast"), PreconditionError);
}

TEST_CASE("returned centers and separated subsets attain the reported values")
{
  Rng rng(35);
  for (int t = 0; t < 60; ++t)
    for (auto kind : metric_kinds) {
      Index n = 2 + t % 30;
      auto d = random_distance_matrix(n, kind, rng);
      for (Index m = 1; m <= 5; ++m)
        for (auto mode : {SolveMode::exact, SolveMode::greedy}) {
          auto cover = covering_radius(d, m, mode);
          REQUIRE(!cover.points.empty());
          CHECK(static_cast<Index>(cover.points.size()) <= std::max(m, Index{1}));
          double radius = 0;
          for (Index i = 0; i < n; ++i) {
            double nearest = std::numeric_limits<double>::infinity();
            for (Index c : cover.points)
              nearest = std::min(nearest, d(i, c));
            radius = std::max(radius, nearest);
          }
          CHECK(radius == cover.value);

          if (m >= 2 && m <= n) {
            auto sep = separation_number(d, m, mode);
            REQUIRE(static_cast<Index>(sep.points.size()) == m);
            double smallest = std::numeric_limits<double>::infinity();
            for (std::size_t a = 0; a < sep.points.size(); ++a)
              for (std::size_t b = a + 1; b < sep.points.size(); ++b)
                smallest = std::min(smallest, d(sep.points[a], sep.points[b]));
            CHECK(smallest == sep.value);
          }
        }
    }
}
