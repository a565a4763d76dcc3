#pragma once

#include "hmnc/hmodule.hpp"

#include <array>

namespace hmnc::testing {

// The three algebras used across the suites: C, M_2, M_2 ⊕ M_3.
inline std::array<AlgebraShape, 3> algebras() { return {AlgebraShape{1}, AlgebraShape{2}, AlgebraShape{2, 3}}; }

inline Element scalar_element(cplx c)
{
  return Element::scalar(AlgebraShape{1}, c);
}

inline Element matrix_element(std::initializer_list<std::initializer_list<cplx>> rows)
{
  Index n = static_cast<Index>(rows.size());
  CMatrix m(n, n);
  Index i = 0;
  for (auto r : rows) {
    Index j = 0;
    for (cplx v : r)
      m(i, j++) = v;
    ++i;
  }
  return Element(AlgebraShape{n}, {m});
}

// Vector over A = C from its coordinates.
inline ModuleVector scalar_vector(std::initializer_list<cplx> coords)
{
  std::vector<Element> cs;
  for (cplx c : coords)
    cs.push_back(scalar_element(c));
  return ModuleVector(AlgebraShape{1}, cs);
}

} // namespace hmnc::testing
