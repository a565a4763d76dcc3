#include "doctest.h"
#include "test_support.hpp"

using namespace hmnc;
using namespace hmnc::testing;

namespace {
const cplx I(0, 1);
}

TEST_CASE("alg_mul")
{
  Rng rng(1);
  for (const auto &shape : algebras()) {
    auto a = random_element<cplx>(shape, rng);
    CHECK(alg_norm(Element::identity(shape) * a - a) == 0.0);
  }
  CHECK(alg_mul(scalar_element(2.0), scalar_element(3.0)).block(0)(0, 0) == cplx(6.0));

  auto nil = matrix_element({{0, 1}, {0, 0}});
  CHECK((nil * nil).block(0).isZero(0));

  CHECK_THROWS_AS(alg_mul(scalar_element(1.0), matrix_element({{1, 0}, {0, 1}})), ShapeError);
}

TEST_CASE("alg_adjoint")
{
  Rng rng(2);
  auto shape = AlgebraShape{2, 3};
  auto h = random_hermitian<cplx>(shape, rng);
  CHECK(alg_norm(alg_adjoint(h) - h) < 1e-15);

  auto a = matrix_element({{0, I}, {0, 0}});
  auto expected = matrix_element({{0, 0}, {-I, 0}});
  CHECK(alg_norm(alg_adjoint(a) - expected) == 0.0);

  for (int t = 0; t < 20; ++t) {
    auto x = random_element<cplx>(shape, rng);
    auto y = random_element<cplx>(shape, rng);
    CHECK(alg_norm(alg_adjoint(x * y) - alg_adjoint(y) * alg_adjoint(x)) < 1e-12);
    CHECK(alg_norm(alg_adjoint(alg_adjoint(x)) - x) == 0.0);
  }
}

TEST_CASE("alg_norm")
{
  CHECK(alg_norm(Element::zero(AlgebraShape{2, 3})) == 0.0);

  // Oracle for a Hermitian block: largest |eigenvalue|.
  auto d = matrix_element({{3, 0}, {0, -4}});
  Eigen::SelfAdjointEigenSolver<CMatrix> es(d.block(0));
  double oracle = es.eigenvalues().cwiseAbs().maxCoeff();
  CHECK(oracle == doctest::Approx(4.0).epsilon(1e-15));
  CHECK(alg_norm(d) == doctest::Approx(oracle).epsilon(1e-14));

  // Singular values of the nilpotent Jordan block are {1, 0}.
  CHECK(alg_norm(matrix_element({{0, 1}, {0, 0}})) == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("is_positive")
{
  CHECK(is_positive(Element::identity(AlgebraShape{2, 3}), 1e-9));
  CHECK_FALSE(is_positive(matrix_element({{1, 0}, {0, -1e-3}}), 1e-9));
  CHECK_FALSE(is_positive(matrix_element({{1, 1}, {0, 1}}), 1e-9));

  Rng rng(3);
  for (const auto &shape : algebras())
    for (int t = 0; t < 10; ++t) {
      auto b = random_element<cplx>(shape, rng);
      auto bb = alg_adjoint(b) * b;
      CHECK(min_eigenvalue(bb) >= -1e-12);
      CHECK(is_positive(bb, 1e-9));
    }
}

TEST_CASE("norming_state")
{
  auto shape = AlgebraShape{2, 3};
  auto phi = norming_state(Element::identity(shape));
  CHECK(std::abs(phi(Element::identity(shape))) == doctest::Approx(1.0));

  auto d = matrix_element({{2, 0}, {0, -3}});
  auto psi = norming_state(d);
  CHECK(std::abs(psi(d)) == doctest::Approx(3.0).epsilon(1e-14));
  // Supported on the second coordinate.
  CHECK(std::abs(psi.density(0)(1, 1)) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(std::abs(psi.density(0)(0, 0)) < 1e-14);

  auto z = Element::zero(shape);
  CHECK(std::abs(norming_state(z)(z)) == 0.0);

  CHECK_THROWS_AS(norming_state(matrix_element({{0, 1}, {0, 0}})), NumericalError);
}

TEST_CASE("norming_state ties resolve to the lowest block")
{
  auto shape = AlgebraShape{2, 2};
  auto u = Element::identity(shape);
  auto phi = norming_state(u);
  CHECK(std::abs(phi.density(0).trace() - 1.0) < 1e-14);
  CHECK(phi.density(1).isZero(0));
}

TEST_CASE("random_unitary")
{
  for (const auto &shape : algebras()) {
    CHECK(unitarity_defect(Element::identity(shape)) == 0.0);
    auto u = random_unitary<cplx>(shape, 42);
    CHECK(unitarity_defect(u) <= 1e-12);
    CHECK(std::abs(alg_norm(u) - 1.0) <= 1e-12);
    auto v = random_unitary<cplx>(shape, 42);
    for (Index k = 0; k < shape.blocks(); ++k)
      CHECK(u.block(k) == v.block(k));
  }
}

TEST_CASE("states")
{
  auto shape = AlgebraShape{2, 3};
  CHECK_THROWS_AS(State(shape, {CMatrix::Identity(2, 2), CMatrix::Zero(3, 3)}), NumericalError);
  CMatrix bad = CMatrix::Zero(2, 2);
  bad(0, 0) = 2.0;
  bad(1, 1) = -1.0;
  CHECK_THROWS_AS(State(shape, {bad, CMatrix::Zero(3, 3)}), NumericalError);
  auto tau = State::tracial(shape);
  CHECK(std::abs(tau(Element::identity(shape)) - 1.0) < 1e-15);
}

TEST_CASE("C*-algebra invariants on random elements")
{
  Rng rng(11);
  for (const auto &shape : algebras())
    for (int t = 0; t < 50; ++t) {
      auto a = random_element<cplx>(shape, rng);
      auto b = random_element<cplx>(shape, rng);
      double na = alg_norm(a);

      // C*-identity
      CHECK(std::abs(alg_norm(alg_adjoint(a) * a) - na * na) <= 1e-9 * (1 + na * na));
      // submultiplicativity
      CHECK(alg_norm(a * b) <= na * alg_norm(b) + 1e-9);

      // states are positive and unital
      auto phi = State::random(shape, rng);
      CHECK(std::real(phi(alg_adjoint(a) * a)) >= -1e-10);
      CHECK(std::abs(phi(Element::identity(shape)) - 1.0) <= 1e-12);

      // norming states on Hermitian and unitary elements
      auto h = random_hermitian<cplx>(shape, rng);
      CHECK(std::abs(norming_state(h)(h)) >= alg_norm(h) - 1e-9);
      auto u = random_unitary<cplx>(shape, rng());
      CHECK(std::abs(norming_state(u)(u)) >= alg_norm(u) - 1e-9);
      auto n = random_normal<cplx>(shape, rng);
      CHECK(std::abs(norming_state(n)(n)) >= alg_norm(n) - 1e-9);
    }
}
