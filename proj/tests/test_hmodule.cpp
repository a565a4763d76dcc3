#include "doctest.h"
#include "test_support.hpp"

using namespace hmnc;
using namespace hmnc::testing;

TEST_CASE("inner")
{
  auto shape = AlgebraShape{2, 3};
  auto e1 = ModuleVector::basis(shape, 4, 0);
  auto e2 = ModuleVector::basis(shape, 4, 1);
  CHECK(alg_norm(inner(e1, e1) - Element::identity(shape)) == 0.0);
  CHECK(alg_norm(inner(e1, e2)) == 0.0);

  // A = C: ⟨(1,2),(0,1)⟩ = 1̄·0 + 2̄·1 = 2
  CHECK(inner(scalar_vector({1, 2}), scalar_vector({0, 1})).block(0)(0, 0) == cplx(2.0));
  // conjugate-linear in the first slot
  CHECK(inner(scalar_vector({cplx(0, 1)}), scalar_vector({1})).block(0)(0, 0) == cplx(0, -1));

  Rng rng(5);
  auto x = random_vector<cplx>(shape, 4, rng);
  auto y = random_vector<cplx>(shape, 4, rng);
  CHECK(alg_norm(inner(x, y) - alg_adjoint(inner(y, x))) < 1e-13);
  CHECK_THROWS_AS(inner(x, random_vector<cplx>(shape, 5, rng)), ShapeError);
}

TEST_CASE("vec_norm")
{
  auto shape = AlgebraShape{2, 3};
  CHECK(vec_norm(ModuleVector::zero(shape, 3)) == 0.0);
  CHECK(vec_norm(ModuleVector::basis(shape, 3, 2)) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(vec_norm(scalar_vector({3, 4})) == doctest::Approx(5.0).epsilon(1e-15));
}

TEST_CASE("apply_projection")
{
  Rng rng(6);
  auto shape = AlgebraShape{2};
  auto x = random_vector<cplx>(shape, 3, rng);
  auto p2x = apply_projection(Projection::head(2), x);
  CHECK(alg_norm(p2x.coord(0) - x.coord(0)) == 0.0);
  CHECK(alg_norm(p2x.coord(1) - x.coord(1)) == 0.0);
  CHECK(alg_norm(p2x.coord(2)) == 0.0);

  CHECK(vec_norm(apply_projection(Projection::head(3), x) - x) == 0.0);

  auto q = Projection::onto_range(shape, 3, {gaussian_matrix<cplx>(6, 2, rng)});
  auto qx = apply_projection(q, x);
  CHECK(vec_norm(apply_projection(q, qx) - qx) < 1e-12);
  CHECK(vec_norm(apply_projection(Projection::head(2), p2x) - p2x) == 0.0);

  CHECK_THROWS_AS(apply_projection(Projection::head(4), x), ShapeError);
}

TEST_CASE("matrix projections are validated at construction")
{
  auto shape = AlgebraShape{1};
  CMatrix q = CMatrix::Zero(2, 2);
  q(0, 0) = 1;
  q(0, 1) = 1; // idempotent but not self-adjoint
  CHECK_THROWS_AS(Projection::from_blocks(shape, 2, {q}), ProjectionError);
  CMatrix h = 0.5 * CMatrix::Identity(2, 2); // self-adjoint, Q² ≠ Q
  try {
    Projection::from_blocks(shape, 2, {h});
    FAIL("expected ProjectionError");
  } catch (const ProjectionError &e) {
    CHECK(e.invariant() == "idempotent");
  }
}

TEST_CASE("distance_to_range")
{
  Rng rng(7);
  auto shape = AlgebraShape{2, 3};
  auto q = Projection::onto_range(shape, 3, {gaussian_matrix<cplx>(6, 3, rng), gaussian_matrix<cplx>(9, 4, rng)});
  auto in_range = apply_projection(q, random_vector<cplx>(shape, 3, rng));
  CHECK(distance_to_range(q, in_range) < 1e-12);

  CHECK(distance_to_range(Projection::head(2), ModuleVector::basis(shape, 3, 2)) ==
        doctest::Approx(1.0).epsilon(1e-15));
  CHECK(distance_to_range(Projection::head(1), scalar_vector({1, 1, 1})) ==
        doctest::Approx(std::sqrt(2.0)).epsilon(1e-15));

  // Never larger than the distance to any sampled point of the range.
  for (int t = 0; t < 30; ++t) {
    auto x = random_vector<cplx>(shape, 3, rng);
    auto y = apply_projection(q, random_vector<cplx>(shape, 3, rng));
    CHECK(distance_to_range(q, x) <= vec_norm(x - y) + 1e-10);
  }
}

TEST_CASE("apply_theta")
{
  auto shape = AlgebraShape{2};
  auto e1 = ModuleVector::basis(shape, 3, 0);
  auto e2 = ModuleVector::basis(shape, 3, 1);
  CHECK(vec_norm(apply_theta(e1, e1, e1) - e1) == 0.0);
  CHECK(vec_norm(apply_theta(e1, e2, e1)) == 0.0);

  // A = C: Θ_{(1,0),(0,2)}(0,3) = (1,0)·(2̄·3) = (6,0)
  auto out = apply_theta(scalar_vector({1, 0}), scalar_vector({0, 2}), scalar_vector({0, 3}));
  CHECK(vec_norm(out - scalar_vector({6, 0})) == 0.0);
}

TEST_CASE("right_mul")
{
  Rng rng(8);
  for (const auto &shape : algebras()) {
    auto x = random_vector<cplx>(shape, 4, rng);
    auto y = random_vector<cplx>(shape, 4, rng);
    auto a = random_element<cplx>(shape, rng);
    CHECK(vec_norm(right_mul(x, Element::identity(shape)) - x) == 0.0);
    CHECK(vec_norm(right_mul(x, Element::zero(shape))) == 0.0);
    // ⟨x, y a⟩ = ⟨x, y⟩ a
    CHECK(alg_norm(inner(x, right_mul(y, a)) - inner(x, y) * a) <= 1e-12 * (1 + alg_norm(inner(x, y)) * alg_norm(a)));
    for (int t = 0; t < 10; ++t) {
      auto u = random_unitary<cplx>(shape, rng());
      CHECK(std::abs(vec_norm(right_mul(x, u)) - vec_norm(x)) <= 1e-10);
    }
  }
}

TEST_CASE("direct sums")
{
  Rng rng(9);
  auto shape = AlgebraShape{2, 3};
  DirectSumContext ctx(3, 2);
  auto x = random_vector<cplx>(shape, 3, rng);
  auto y = random_vector<cplx>(shape, 2, rng);
  CHECK(vec_norm(direct_sum_part(ctx, Summand::first, direct_sum_embed(ctx, Summand::first, x)) - x) == 0.0);
  CHECK(vec_norm(direct_sum_part(ctx, Summand::second, direct_sum_embed(ctx, Summand::second, y)) - y) == 0.0);
  CHECK(vec_norm(direct_sum_part(ctx, Summand::first, direct_sum_embed(ctx, Summand::second, y))) == 0.0);

  for (int t = 0; t < 20; ++t) {
    x = random_vector<cplx>(shape, 3, rng);
    y = random_vector<cplx>(shape, 2, rng);
    auto s = direct_sum_embed(ctx, Summand::first, x) + direct_sum_embed(ctx, Summand::second, y);
    double lhs = std::pow(vec_norm(s), 2);
    double rhs = std::pow(vec_norm(x), 2) + std::pow(vec_norm(y), 2);
    CHECK(lhs <= rhs + 1e-10);
  }
  CHECK_THROWS_AS(direct_sum_embed(ctx, Summand::first, y), ShapeError);
}

TEST_CASE("module invariants")
{
  Rng rng(10);
  for (const auto &shape : algebras())
    for (int t = 0; t < 25; ++t) {
      const Index n = 6;
      auto x = random_vector<cplx>(shape, n, rng);
      auto y = random_vector<cplx>(shape, n, rng);

      // Cauchy–Schwarz: ⟨x,y⟩⟨y,x⟩ ≤ ‖y‖²⟨x,x⟩
      double ny = vec_norm(y);
      auto residual = (ny * ny) * inner(x, x) - inner(x, y) * inner(y, x);
      CHECK(is_positive(residual, 1e-8 * (1 + ny * ny * vec_norm(x) * vec_norm(x))));

      double prev = std::numeric_limits<double>::infinity();
      for (Index k = 0; k <= n; ++k) {
        CHECK(vec_norm(head(x, k)) <= vec_norm(x) + 1e-10);
        double t_norm = vec_norm(tail(x, k));
        CHECK(t_norm <= prev + 1e-12);
        prev = t_norm;
      }
      CHECK(prev == 0.0);
    }
}
