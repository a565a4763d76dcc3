#include "doctest.h"
#include "hmnc/opmnc.hpp"
#include "test_support.hpp"

using namespace hmnc;
using namespace hmnc::testing;

namespace {

AdjointableOperator harmonic(const AlgebraShape &shape, Index n)
{
  std::vector<cplx> d;
  for (Index j = 0; j < n; ++j)
    d.push_back(1.0 / static_cast<double>(j + 1));
  return AdjointableOperator::diagonal(shape, std::span<const cplx>(d));
}

AdjointableOperator random_theta(const AlgebraShape &shape, Index n, Index support, Index terms, Rng &rng)
{
  std::vector<ModuleVector> ys, zs;
  for (Index i = 0; i < terms; ++i) {
    ys.push_back(head(random_vector<cplx>(shape, n, rng), support));
    zs.push_back(random_vector<cplx>(shape, n, rng));
  }
  return AdjointableOperator::theta(ys, zs);
}

} // namespace

TEST_CASE("op_apply")
{
  Rng rng(71);
  auto shape = AlgebraShape{2, 3};
  auto x = random_vector<cplx>(shape, 4, rng);
  CHECK(vec_norm(op_apply(AdjointableOperator::identity(shape, 4), x) - x) == 0.0);

  auto e1 = ModuleVector::basis(shape, 4, 0);
  auto e2 = ModuleVector::basis(shape, 4, 1);
  std::vector<ModuleVector> ys{e1}, zs{e2};
  auto theta = AdjointableOperator::theta(ys, zs);
  CHECK(vec_norm(op_apply(theta, x) - apply_theta(e1, e2, x)) <= 1e-14);
  CHECK(theta.support() == 1);

  std::vector<cplx> scale{2.0, cplx(0, 1), 0.0, -1.0};
  auto d = AdjointableOperator::diagonal(shape, std::span<const cplx>(scale));
  auto y = op_apply(d, x);
  for (Index j = 0; j < 4; ++j)
    CHECK(alg_norm(y.coord(j) - scale[static_cast<std::size_t>(j)] * x.coord(j)) <= 1e-15);

  // Entry layout: T_ij acts on coordinate j and lands in coordinate i.
  std::vector<std::vector<Element>> entries(2, std::vector<Element>(2, Element::zero(shape)));
  auto a = random_element<cplx>(shape, rng);
  entries[0][1] = a;
  auto t = AdjointableOperator::from_entries(shape, entries);
  auto v = random_vector<cplx>(shape, 2, rng);
  auto tv = op_apply(t, v);
  CHECK(alg_norm(tv.coord(0) - a * v.coord(1)) <= 1e-13);
  CHECK(alg_norm(tv.coord(1)) == 0.0);
  CHECK(alg_norm(t.entry(0, 1) - a) == 0.0);

  CHECK_THROWS_AS(op_apply(d, random_vector<cplx>(shape, 3, rng)), ShapeError);
}

TEST_CASE("op_norm")
{
  auto shape = AlgebraShape{2};
  CHECK(op_norm(AdjointableOperator::zero(shape, 3)) == 0.0);
  std::vector<Element> unitaries;
  for (int j = 0; j < 3; ++j)
    unitaries.push_back(random_unitary<cplx>(shape, static_cast<std::uint64_t>(j)));
  CHECK(op_norm(AdjointableOperator::diagonal(shape, std::span<const Element>(unitaries))) ==
        doctest::Approx(1.0).epsilon(1e-12));
  CHECK(op_norm(harmonic(AlgebraShape{1}, 3)) == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("adjoint identity")
{
  Rng rng(72);
  for (const auto &shape : algebras())
    for (int t = 0; t < 20; ++t) {
      auto op = AdjointableOperator::random(shape, 4, rng);
      auto x = random_vector<cplx>(shape, 4, rng);
      auto y = random_vector<cplx>(shape, 4, rng);
      CHECK(alg_norm(inner(op_apply(op, x), y) - inner(x, op_apply(op_adjoint(op), y))) <= 1e-10);
      CHECK(std::abs(op_norm(op) - 1.0) <= 1e-12);
    }
}

TEST_CASE("lambda_op_profile")
{
  for (const auto &shape : algebras()) {
    auto s = lambda_op_profile(AdjointableOperator::identity(shape, 5), 5);
    for (Index n = 0; n < 5; ++n)
      CHECK(s[static_cast<std::size_t>(n)] == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(s[5] == 0.0);
  }

  auto h = lambda_op_profile(harmonic(AlgebraShape{1}, 6), 6);
  for (Index n = 0; n < 6; ++n)
    CHECK(h[static_cast<std::size_t>(n)] == doctest::Approx(1.0 / static_cast<double>(n + 1)).epsilon(1e-12));

  Rng rng(73);
  auto k = random_theta(AlgebraShape{2, 3}, 6, 2, 3, rng);
  auto sk = lambda_op_profile(k, 6);
  for (Index n = 2; n <= 6; ++n)
    CHECK(sk[static_cast<std::size_t>(n)] == 0.0);
  CHECK(sk[0] > 0);
  CHECK(vanishing_level(k) <= 2);
  CHECK(vanishing_level(AdjointableOperator::identity(AlgebraShape{2}, 4)) == 4);

  CHECK_THROWS_AS(lambda_op_profile(k, 7), PreconditionError);
}

TEST_CASE("operator_property_suite")
{
  Rng rng(74);
  auto shape = AlgebraShape{2};
  auto id = AdjointableOperator::identity(shape, 4);
  auto k = random_theta(shape, 4, 1, 2, rng);

  auto r = operator_property_suite(id, id, k, 2.0, 2);
  CHECK(r.holds);
  CHECK(r.lambda_sum == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(r.subadditivity_slack >= -1e-12);
  CHECK(r.homogeneity_defect <= 1e-12);
  CHECK(r.perturbation_defect == 0.0);

  auto t = AdjointableOperator::random(shape, 4, rng);
  auto doubled = lambda_op_profile(cplx(2.0) * t, 4);
  auto single = lambda_op_profile(t, 4);
  for (std::size_t n = 0; n < single.size(); ++n)
    CHECK(std::abs(doubled[n] - 2 * single[n]) <= 1e-12);

  // Θ_{e_1, z} perturbations leave the profile unchanged from level 1 on.
  auto e1 = ModuleVector::basis(shape, 4, 0);
  std::vector<ModuleVector> ys{e1}, zs{random_vector<cplx>(shape, 4, rng)};
  auto k1 = AdjointableOperator::theta(ys, zs);
  auto perturbed = lambda_op_profile(t + k1, 4);
  for (std::size_t n = 1; n < single.size(); ++n)
    CHECK(perturbed[n] == single[n]);

  CHECK_THROWS_AS(operator_property_suite(t, t, random_theta(shape, 4, 3, 1, rng), 1.0, 2), PreconditionError);
  CHECK_THROWS_AS(operator_property_suite(t, t, k, 0.0, 2), PreconditionError);
  CHECK_THROWS_AS(operator_property_suite(t, t, t, 1.0, 2), PreconditionError);
}

TEST_CASE("image_ball_sampler")
{
  auto shape = AlgebraShape{2};
  auto zero = image_ball_sampler(AdjointableOperator::zero(shape, 3), 4, 1);
  REQUIRE(zero.points().size() == 4);
  for (const auto &x : zero.points())
    CHECK(vec_norm(x) == 0.0);

  auto ball = image_ball_sampler(AdjointableOperator::identity(shape, 3), 4, 2);
  CHECK(ball.points().size() == 7);
  for (const auto &x : ball.points())
    CHECK(vec_norm(x) <= 1 + 1e-10);
  for (Index n = 0; n < 3; ++n)
    CHECK(std::abs(vec_norm(tail(ball.points()[static_cast<std::size_t>(n)], n)) - 1.0) <= 1e-12);

  Rng rng(75);
  auto t = AdjointableOperator::random(AlgebraShape{2, 3}, 4, rng);
  auto e = image_ball_sampler(t, 2, 3);
  auto s = lambda_op_profile(t, 3);
  for (Index n = 0; n < 4; ++n)
    CHECK(std::abs(vec_norm(tail(e.points()[static_cast<std::size_t>(n)], n)) - s[static_cast<std::size_t>(n)]) <=
          1e-8);

  auto again = image_ball_sampler(t, 2, 3);
  for (std::size_t i = 0; i < e.points().size(); ++i)
    for (Index k = 0; k < 2; ++k)
      CHECK(again.points()[i].stack(k) == e.points()[i].stack(k));
  CHECK_THROWS_AS(image_ball_sampler(t, 0, 3), PreconditionError);
}
