#pragma once

// The truncated standard Hilbert module A^N.
//
// A vector x = (ξ_1, ..., ξ_N) is stored per algebra block k as the stacked
// (N·d_k) × d_k matrix X_k whose j-th row band is (ξ_j)_k. In that layout
//   ⟨x, y⟩_k = X_k* Y_k,   (x a)_k = X_k a_k,   (T x)_k = T_k X_k,
// so every module operation is one dense product per block.

#include "hmnc/algebra.hpp"

#include <optional>

namespace hmnc {

template <typename Scalar> class BasicModuleVector {
public:
  using Matrix = DenseMatrix<Scalar>;
  using Element = BasicElement<Scalar>;
  using Real = typename Eigen::NumTraits<Scalar>::Real;

  BasicModuleVector() : BasicModuleVector(AlgebraShape(), 1) {}

  BasicModuleVector(AlgebraShape shape, Index truncation) : shape_(std::move(shape)), n_(truncation)
  {
    if (n_ < 1)
      throw ShapeError("module truncation must be at least 1");
    for (Index d : shape_.dims())
      stacks_.push_back(Matrix::Zero(n_ * d, d));
  }

  BasicModuleVector(AlgebraShape shape, Index truncation, std::vector<Matrix> stacks)
      : shape_(std::move(shape)), n_(truncation), stacks_(std::move(stacks))
  {
    if (n_ < 1)
      throw ShapeError("module truncation must be at least 1");
    if (static_cast<Index>(stacks_.size()) != shape_.blocks())
      throw ShapeError("module vector block count does not match algebra shape");
    for (Index k = 0; k < shape_.blocks(); ++k)
      if (stack(k).rows() != n_ * shape_.dim(k) || stack(k).cols() != shape_.dim(k))
        throw ShapeError("module vector stack " + std::to_string(k) + " has wrong dimensions");
  }

  BasicModuleVector(const AlgebraShape &shape, const std::vector<Element> &coords)
      : BasicModuleVector(shape, static_cast<Index>(coords.size()))
  {
    for (Index j = 0; j < n_; ++j)
      set_coord(j, coords[static_cast<std::size_t>(j)]);
  }

  static BasicModuleVector zero(const AlgebraShape &shape, Index truncation)
  {
    return BasicModuleVector(shape, truncation);
  }

  /// e_slot: the unit of A in coordinate `slot` (0-based), zero elsewhere.
  static BasicModuleVector basis(const AlgebraShape &shape, Index truncation, Index slot)
  {
    BasicModuleVector e(shape, truncation);
    e.set_coord(slot, Element::identity(shape));
    return e;
  }

  const AlgebraShape &shape() const { return shape_; }
  Index truncation() const { return n_; }
  const Matrix &stack(Index k) const { return stacks_[static_cast<std::size_t>(k)]; }
  Matrix &stack(Index k) { return stacks_[static_cast<std::size_t>(k)]; }
  const std::vector<Matrix> &stacks() const { return stacks_; }

  Element coord(Index j) const
  {
    check_slot(j);
    Element e(shape_);
    for (Index k = 0; k < shape_.blocks(); ++k)
      e.block(k) = stack(k).middleRows(j * shape_.dim(k), shape_.dim(k));
    return e;
  }

  void set_coord(Index j, const Element &e)
  {
    check_slot(j);
    require_same_shape(shape_, e.shape(), "set_coord");
    for (Index k = 0; k < shape_.blocks(); ++k)
      stack(k).middleRows(j * shape_.dim(k), shape_.dim(k)) = e.block(k);
  }

  BasicModuleVector &operator+=(const BasicModuleVector &o)
  {
    require_compatible(o, "vector +");
    for (std::size_t k = 0; k < stacks_.size(); ++k)
      stacks_[k] += o.stacks_[k];
    return *this;
  }
  BasicModuleVector &operator-=(const BasicModuleVector &o)
  {
    require_compatible(o, "vector -");
    for (std::size_t k = 0; k < stacks_.size(); ++k)
      stacks_[k] -= o.stacks_[k];
    return *this;
  }
  BasicModuleVector &operator*=(Scalar c)
  {
    for (auto &s : stacks_)
      s *= c;
    return *this;
  }

  void require_compatible(const BasicModuleVector &o, const char *what) const
  {
    require_same_shape(shape_, o.shape_, what);
    if (n_ != o.n_)
      throw ShapeError(std::string(what) + ": truncation mismatch (" + std::to_string(n_) + " vs " +
                       std::to_string(o.n_) + ")");
  }

private:
  void check_slot(Index j) const
  {
    if (j < 0 || j >= n_)
      throw ShapeError("coordinate index " + std::to_string(j) + " outside truncation " + std::to_string(n_));
  }

  AlgebraShape shape_;
  Index n_;
  std::vector<Matrix> stacks_;
};

template <typename Scalar>
BasicModuleVector<Scalar> operator+(BasicModuleVector<Scalar> a, const BasicModuleVector<Scalar> &b)
{
  return a += b;
}
template <typename Scalar>
BasicModuleVector<Scalar> operator-(BasicModuleVector<Scalar> a, const BasicModuleVector<Scalar> &b)
{
  return a -= b;
}
template <typename Scalar> BasicModuleVector<Scalar> operator-(BasicModuleVector<Scalar> a)
{
  return a *= Scalar(-1);
}
template <typename Scalar> BasicModuleVector<Scalar> operator*(std::type_identity_t<Scalar> c, BasicModuleVector<Scalar> a)
{
  return a *= c;
}

/// ⟨x, y⟩ = Σ_j ξ_j* η_j.
template <typename Scalar>
BasicElement<Scalar> inner(const BasicModuleVector<Scalar> &x, const BasicModuleVector<Scalar> &y)
{
  x.require_compatible(y, "inner");
  BasicElement<Scalar> out(x.shape());
  for (Index k = 0; k < x.shape().blocks(); ++k)
    out.block(k).noalias() = x.stack(k).adjoint() * y.stack(k);
  return out;
}

/// ‖x‖ = ‖⟨x, x⟩‖^{1/2}.
template <typename Scalar> typename BasicModuleVector<Scalar>::Real vec_norm(const BasicModuleVector<Scalar> &x)
{
  using std::sqrt;
  return sqrt(alg_norm(inner(x, x)));
}

/// Right action x·a, coordinatewise ξ_j a.
template <typename Scalar>
BasicModuleVector<Scalar> right_mul(const BasicModuleVector<Scalar> &x, const BasicElement<Scalar> &a)
{
  require_same_shape(x.shape(), a.shape(), "right_mul");
  BasicModuleVector<Scalar> out(x.shape(), x.truncation());
  for (Index k = 0; k < x.shape().blocks(); ++k)
    out.stack(k).noalias() = x.stack(k) * a.block(k);
  return out;
}

/// Θ_{y,z}(x) = y⟨z, x⟩.
template <typename Scalar>
BasicModuleVector<Scalar> apply_theta(const BasicModuleVector<Scalar> &y, const BasicModuleVector<Scalar> &z,
                                      const BasicModuleVector<Scalar> &x)
{
  y.require_compatible(z, "apply_theta");
  return right_mul(y, inner(z, x));
}

/// P_n x: keeps coordinates 0..n−1.
template <typename Scalar> BasicModuleVector<Scalar> head(BasicModuleVector<Scalar> x, Index n)
{
  if (n < 0 || n > x.truncation())
    throw ShapeError("head projection index " + std::to_string(n) + " outside [0, " +
                     std::to_string(x.truncation()) + "]");
  for (Index k = 0; k < x.shape().blocks(); ++k) {
    Index d = x.shape().dim(k);
    x.stack(k).bottomRows((x.truncation() - n) * d).setZero();
  }
  return x;
}

/// (I − P_n) x: zeroes coordinates 0..n−1.
template <typename Scalar> BasicModuleVector<Scalar> tail(BasicModuleVector<Scalar> x, Index n)
{
  if (n < 0 || n > x.truncation())
    throw ShapeError("tail projection index " + std::to_string(n) + " outside [0, " +
                     std::to_string(x.truncation()) + "]");
  for (Index k = 0; k < x.shape().blocks(); ++k)
    x.stack(k).topRows(n * x.shape().dim(k)).setZero();
  return x;
}

/// (P_hi − P_lo) x: keeps coordinates lo..hi−1.
template <typename Scalar> BasicModuleVector<Scalar> band(const BasicModuleVector<Scalar> &x, Index lo, Index hi)
{
  if (lo > hi)
    throw ShapeError("band projection needs lo <= hi");
  return tail(head(x, hi), lo);
}

/// Largest coordinate index + 1 carrying a nonzero entry (0 for the zero vector).
template <typename Scalar> Index support_end(const BasicModuleVector<Scalar> &x)
{
  Index end = 0;
  for (Index k = 0; k < x.shape().blocks(); ++k) {
    Index d = x.shape().dim(k);
    for (Index j = x.truncation(); j > end; --j)
      if (!x.stack(k).middleRows((j - 1) * d, d).isZero(0)) {
        end = j;
        break;
      }
  }
  return end;
}

// ---------------------------------------------------------------------------
// Projections

/// Self-adjoint idempotent module map: a head projection P_n, or a matrix Q
/// given per algebra block as an (N·d_k)-square matrix acting by left product.
template <typename Scalar> class ModuleProjection {
public:
  using Matrix = DenseMatrix<Scalar>;
  using Real = typename Eigen::NumTraits<Scalar>::Real;

  static constexpr Real default_tol = Real(1e-9);

  struct Defects {
    Real self_adjoint = 0;
    Real idempotent = 0;
  };

  static ModuleProjection head(Index n)
  {
    if (n < 0)
      throw ShapeError("head projection index must be nonnegative");
    ModuleProjection p;
    p.head_ = n;
    return p;
  }

  static ModuleProjection from_blocks(const AlgebraShape &shape, Index truncation, std::vector<Matrix> blocks,
                                      Real tol = default_tol)
  {
    ModuleProjection p;
    p.shape_ = shape;
    p.n_ = truncation;
    p.blocks_ = std::move(blocks);
    if (static_cast<Index>(p.blocks_.size()) != shape.blocks())
      throw ShapeError("projection block count does not match algebra shape");
    for (Index k = 0; k < shape.blocks(); ++k) {
      Index side = truncation * shape.dim(k);
      if (p.block(k).rows() != side || p.block(k).cols() != side)
        throw ShapeError("projection block " + std::to_string(k) + " has wrong dimensions");
    }
    Defects d = defects(p.blocks_);
    if (d.self_adjoint > tol)
      throw ProjectionError("self_adjoint", d.self_adjoint);
    if (d.idempotent > tol)
      throw ProjectionError("idempotent", d.idempotent);
    return p;
  }

  /// Orthogonal projection onto the column space of each block of `range`.
  static ModuleProjection onto_range(const AlgebraShape &shape, Index truncation, const std::vector<Matrix> &range,
                                     Real rank_tol = Real(1e-10))
  {
    std::vector<Matrix> blocks;
    for (const auto &m : range) {
      Eigen::JacobiSVD<Matrix> svd(m, Eigen::ComputeThinU);
      Real top = svd.singularValues().size() ? svd.singularValues()(0) : Real(0);
      Index rank = 0;
      for (Index i = 0; i < svd.singularValues().size(); ++i)
        if (svd.singularValues()(i) > rank_tol * std::max(Real(1), top))
          ++rank;
      Matrix u = svd.matrixU().leftCols(rank);
      blocks.push_back(u * u.adjoint());
    }
    return from_blocks(shape, truncation, std::move(blocks));
  }

  static Defects defects(const std::vector<Matrix> &blocks)
  {
    Defects d;
    for (const auto &q : blocks) {
      d.self_adjoint = std::max(d.self_adjoint, spectral_norm(q - q.adjoint()));
      d.idempotent = std::max(d.idempotent, spectral_norm(q * q - q));
    }
    return d;
  }

  bool is_head() const { return head_.has_value(); }
  Index head_index() const { return *head_; }
  const Matrix &block(Index k) const { return blocks_[static_cast<std::size_t>(k)]; }
  const std::vector<Matrix> &blocks() const { return blocks_; }
  const AlgebraShape &shape() const { return shape_; }
  Index truncation() const { return n_; }

  /// Dense per-block matrices for a module of the given shape and truncation.
  std::vector<Matrix> dense(const AlgebraShape &shape, Index truncation) const
  {
    if (!is_head()) {
      require_same_shape(shape_, shape, "projection");
      if (n_ != truncation)
        throw ShapeError("projection truncation mismatch");
      return blocks_;
    }
    if (*head_ > truncation)
      throw ShapeError("head projection index exceeds truncation");
    std::vector<Matrix> out;
    for (Index d : shape.dims()) {
      Matrix q = Matrix::Zero(truncation * d, truncation * d);
      q.topLeftCorner(*head_ * d, *head_ * d).setIdentity();
      out.push_back(q);
    }
    return out;
  }

private:
  ModuleProjection() = default;

  std::optional<Index> head_;
  AlgebraShape shape_;
  Index n_ = 0;
  std::vector<Matrix> blocks_;
};

template <typename Scalar>
BasicModuleVector<Scalar> apply_projection(const ModuleProjection<Scalar> &p, const BasicModuleVector<Scalar> &x)
{
  if (p.is_head())
    return head(x, p.head_index());
  require_same_shape(p.shape(), x.shape(), "apply_projection");
  if (p.truncation() != x.truncation())
    throw ShapeError("apply_projection: truncation mismatch");
  BasicModuleVector<Scalar> out(x.shape(), x.truncation());
  for (Index k = 0; k < x.shape().blocks(); ++k)
    out.stack(k).noalias() = p.block(k) * x.stack(k);
  return out;
}

/// d(x, ran P) = ‖x − P x‖, exact for self-adjoint idempotents.
template <typename Scalar>
typename BasicModuleVector<Scalar>::Real distance_to_range(const ModuleProjection<Scalar> &p,
                                                           const BasicModuleVector<Scalar> &x)
{
  return vec_norm(x - apply_projection(p, x));
}

// ---------------------------------------------------------------------------
// Direct sums A^{N_1} ⊕ A^{N_2} ≅ A^{N_1 + N_2}

enum class Summand { first, second };

class DirectSumContext {
public:
  DirectSumContext(Index left, Index right) : left_(left), right_(right)
  {
    if (left < 1 || right < 1)
      throw ShapeError("direct sum summands need truncation >= 1");
  }
  Index left() const { return left_; }
  Index right() const { return right_; }
  Index total() const { return left_ + right_; }
  Index truncation(Summand s) const { return s == Summand::first ? left_ : right_; }
  Index offset(Summand s) const { return s == Summand::first ? 0 : left_; }

private:
  Index left_, right_;
};

/// J_s: inclusion of a summand vector into the sum.
template <typename Scalar>
BasicModuleVector<Scalar> direct_sum_embed(const DirectSumContext &ctx, Summand side, const BasicModuleVector<Scalar> &x)
{
  if (x.truncation() != ctx.truncation(side))
    throw ShapeError("direct_sum_embed: truncation does not match summand");
  BasicModuleVector<Scalar> out(x.shape(), ctx.total());
  for (Index k = 0; k < x.shape().blocks(); ++k) {
    Index d = x.shape().dim(k);
    out.stack(k).middleRows(ctx.offset(side) * d, x.truncation() * d) = x.stack(k);
  }
  return out;
}

/// p_s: projection of a sum vector onto a summand.
template <typename Scalar>
BasicModuleVector<Scalar> direct_sum_part(const DirectSumContext &ctx, Summand side, const BasicModuleVector<Scalar> &x)
{
  if (x.truncation() != ctx.total())
    throw ShapeError("direct_sum_part: truncation does not match the sum");
  BasicModuleVector<Scalar> out(x.shape(), ctx.truncation(side));
  for (Index k = 0; k < x.shape().blocks(); ++k) {
    Index d = x.shape().dim(k);
    out.stack(k) = x.stack(k).middleRows(ctx.offset(side) * d, ctx.truncation(side) * d);
  }
  return out;
}

template <typename Scalar>
BasicModuleVector<Scalar> random_vector(const AlgebraShape &shape, Index truncation, Rng &rng)
{
  BasicModuleVector<Scalar> x(shape, truncation);
  for (Index k = 0; k < shape.blocks(); ++k)
    x.stack(k) = gaussian_matrix<Scalar>(truncation * shape.dim(k), shape.dim(k), rng);
  return x;
}

/// Random vector rescaled to module norm `radius`.
template <typename Scalar>
BasicModuleVector<Scalar> random_vector_on_sphere(const AlgebraShape &shape, Index truncation, Rng &rng,
                                                  typename BasicModuleVector<Scalar>::Real radius = 1)
{
  auto x = random_vector<Scalar>(shape, truncation, rng);
  return (radius / vec_norm(x)) * x;
}

// ---------------------------------------------------------------------------
// The library works over complex doubles; the templates above stay generic.

using cplx = std::complex<double>;
using CMatrix = DenseMatrix<cplx>;
using CVector = Eigen::VectorXcd;
using Element = BasicElement<cplx>;
using State = BasicState<cplx>;
using ModuleVector = BasicModuleVector<cplx>;
using Projection = ModuleProjection<cplx>;

} // namespace hmnc
