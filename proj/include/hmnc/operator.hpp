#pragma once

// Adjointable operators on A^N. An operator is an N×N array of algebra
// elements acting by left multiplication, y_i = Σ_j T_ij ξ_j. It is stored per
// algebra block k as one (N·d_k)-square complex matrix whose (i, j) sub-block
// is the k-th block of T_ij, so (T x)_k = T_k X_k on the stacked layout.

#include "hmnc/hmodule.hpp"

#include <optional>
#include <span>

namespace hmnc {

enum class OperatorKind { dense, identity, diagonal, theta, random };

class AdjointableOperator {
public:
  AdjointableOperator(const AlgebraShape &shape, Index truncation, std::vector<CMatrix> blocks,
                      OperatorKind kind = OperatorKind::dense, std::optional<Index> support = std::nullopt);

  static AdjointableOperator zero(const AlgebraShape &shape, Index truncation);
  static AdjointableOperator identity(const AlgebraShape &shape, Index truncation);
  /// T_jj = entries[j], zero off the diagonal.
  static AdjointableOperator diagonal(const AlgebraShape &shape, std::span<const Element> entries);
  /// Coordinatewise scaling by complex numbers.
  static AdjointableOperator diagonal(const AlgebraShape &shape, std::span<const cplx> entries);
  /// Σ_i Θ_{y_i, z_i}; the support level is the largest support_end of the y_i.
  static AdjointableOperator theta(std::span<const ModuleVector> ys, std::span<const ModuleVector> zs);
  /// T_ij = entries[i][j].
  static AdjointableOperator from_entries(const AlgebraShape &shape, const std::vector<std::vector<Element>> &entries);
  /// Gaussian entries scaled to operator norm 1.
  static AdjointableOperator random(const AlgebraShape &shape, Index truncation, Rng &rng);

  const AlgebraShape &shape() const { return shape_; }
  Index truncation() const { return n_; }
  OperatorKind kind() const { return kind_; }
  /// For Θ-combinations: (I − P_n) T = 0 for every n ≥ support().
  std::optional<Index> support() const { return support_; }
  const CMatrix &block(Index k) const { return blocks_[static_cast<std::size_t>(k)]; }
  const std::vector<CMatrix> &blocks() const { return blocks_; }
  Element entry(Index i, Index j) const;

  void require_compatible(const AdjointableOperator &other, const char *what) const;

private:
  AlgebraShape shape_;
  Index n_;
  std::vector<CMatrix> blocks_;
  OperatorKind kind_;
  std::optional<Index> support_;
};

ModuleVector op_apply(const AdjointableOperator &t, const ModuleVector &x);

/// Blockwise conjugate transpose: (T*)_ij = (T_ji)*.
AdjointableOperator op_adjoint(const AdjointableOperator &t);

/// Spectral norm of T in M_N(A): max over algebra blocks.
double op_norm(const AdjointableOperator &t);

/// (I − P_n) T, obtained by zeroing the first n block rows.
AdjointableOperator tail_operator(const AdjointableOperator &t, Index n);

AdjointableOperator operator+(const AdjointableOperator &a, const AdjointableOperator &b);
AdjointableOperator operator-(const AdjointableOperator &a, const AdjointableOperator &b);
AdjointableOperator operator*(cplx c, const AdjointableOperator &a);

/// Q as an operator (a head projection becomes the corresponding diagonal).
AdjointableOperator projection_operator(const Projection &q, const AlgebraShape &shape, Index truncation);

const char *to_string(OperatorKind kind);

} // namespace hmnc
