#include "doctest.h"
#include "hmnc/oracle.hpp"
#include "test_support.hpp"

using namespace hmnc;
using namespace hmnc::testing;

namespace {

Eigen::MatrixXd line(std::initializer_list<double> xs)
{
  std::vector<double> v(xs);
  const Index n = static_cast<Index>(v.size());
  Eigen::MatrixXd d(n, n);
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < n; ++j)
      d(i, j) = std::abs(v[static_cast<std::size_t>(i)] - v[static_cast<std::size_t>(j)]);
  return d;
}

} // namespace

TEST_CASE("exact_cover_radius")
{
  auto d = line({0, 1, 3});
  CHECK(oracle::exact_cover_radius(d, 1) == 2.0);
  CHECK(oracle::exact_cover_radius(d, 2) == 1.0);
  CHECK(oracle::exact_cover_radius(line({5}), 1) == 0.0);
  CHECK(oracle::exact_cover_radius(d, 3) == 0.0);

  // Seventeen points exceed the default budget; m = |points| is always allowed.
  Eigen::MatrixXd big = Eigen::MatrixXd::Ones(17, 17);
  CHECK_THROWS_AS(oracle::exact_cover_radius(big, 2), BudgetExceeded);
  CHECK_THROWS_AS(oracle::exact_cover_radius(line({0, 1, 2, 3, 4, 5}), 5, {16, 4, 10, 10000, 1e-10}), BudgetExceeded);
  CHECK(oracle::exact_cover_radius(line({0, 1, 2, 3, 4, 5}), 6) == 0.0);
}

TEST_CASE("exact_separation_number")
{
  auto d = line({0, 1, 3});
  CHECK(oracle::exact_separation_number(d, 2) == 3.0);
  CHECK(oracle::exact_separation_number(d, 3) == 1.0);
  CHECK(oracle::exact_separation_number(line({1, 1}), 2) == 0.0);
  CHECK_THROWS_AS(oracle::exact_separation_number(d, 4), PreconditionError);
}

TEST_CASE("exact_partition_diameter")
{
  auto d = line({0, 1, 3});
  CHECK(oracle::exact_partition_diameter(d, 2) == 1.0);
  CHECK(oracle::exact_partition_diameter(d, 1) == 3.0);
  CHECK(oracle::exact_partition_diameter(d, 3) == 0.0);
  CHECK(oracle::exact_partition_diameter(d, 7) == 0.0);
  CHECK_THROWS_AS(oracle::exact_partition_diameter(Eigen::MatrixXd::Ones(11, 11), 2), BudgetExceeded);

  // D_m is nonincreasing in m and vanishes once every point has its own part.
  auto five = line({0, 1, 3, 7, 15});
  double prev = std::numeric_limits<double>::infinity();
  for (Index m = 1; m <= 5; ++m) {
    double v = oracle::exact_partition_diameter(five, m);
    CHECK(v <= prev);
    prev = v;
  }
  CHECK(prev == 0.0);
  CHECK(oracle::exact_partition_diameter(five, 2) == 7.0); // {0,1,3,7} | {15}
}

TEST_CASE("spectral_norm_reference")
{
  auto id = oracle::spectral_norm_reference(CMatrix::Identity(4, 4));
  CHECK(id.converged);
  CHECK(id.value == doctest::Approx(1.0).epsilon(1e-12));

  CMatrix d = CMatrix::Zero(2, 2);
  d(0, 0) = 3;
  d(1, 1) = -4;
  auto r = oracle::spectral_norm_reference(d);
  CHECK(r.converged);
  CHECK(r.value == doctest::Approx(4.0).epsilon(1e-12));

  auto z = oracle::spectral_norm_reference(CMatrix::Zero(3, 3));
  CHECK(z.converged);
  CHECK(z.value == 0.0);

  Rng rng(41);
  for (int t = 0; t < 50; ++t) {
    CMatrix m = gaussian_matrix<cplx>(8, 8, rng);
    auto ref = oracle::spectral_norm_reference(m, static_cast<std::uint64_t>(t));
    double solver = spectral_norm(m);
    CHECK(ref.converged);
    CHECK(std::abs(ref.value - solver) <= 1e-8 * solver);
  }

  // Nearly equal singular values with a tiny budget: flagged, not accepted.
  oracle::OracleBudget tiny;
  tiny.power_iterations = 2;
  CMatrix slow = CMatrix::Identity(6, 6);
  slow(5, 5) = 0.999;
  CHECK_FALSE(oracle::spectral_norm_reference(slow, 1, tiny).converged);
}

TEST_CASE("seminorm_reference")
{
  auto shape = AlgebraShape{1};
  auto basis = basis_pair(shape, 3, State::tracial(shape));
  CHECK(oracle::seminorm_reference(basis, ModuleVector::zero(shape, 3)) == 0.0);
  // Basis pair over C: the k = 1 tail is the full ℓ² sum.
  CHECK(oracle::seminorm_reference(basis, scalar_vector({1, 2, 2})) == doctest::Approx(3.0).epsilon(1e-15));

  Rng rng(42);
  double worst = 0;
  for (int t = 0; t < 100; ++t) {
    auto s = algebras()[static_cast<std::size_t>(t % 3)];
    auto pair = random_admissible_pair(s, 4, 5, rng);
    auto x = random_vector<cplx>(s, 4, rng);
    worst = std::max(worst, std::abs(oracle::seminorm_reference(pair, x) - seminorm_eval(pair, x)));
  }
  CHECK(worst <= 1e-12);
}
