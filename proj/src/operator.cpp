#include "hmnc/operator.hpp"

#include <algorithm>

namespace hmnc {

AdjointableOperator::AdjointableOperator(const AlgebraShape &shape, Index truncation, std::vector<CMatrix> blocks,
                                         OperatorKind kind, std::optional<Index> support)
    : shape_(shape), n_(truncation), blocks_(std::move(blocks)), kind_(kind), support_(support)
{
  if (truncation < 1)
    throw ShapeError("operator truncation must be at least 1");
  if (static_cast<Index>(blocks_.size()) != shape.blocks())
    throw ShapeError("operator block count does not match algebra shape");
  for (Index k = 0; k < shape.blocks(); ++k) {
    Index side = truncation * shape.dim(k);
    if (block(k).rows() != side || block(k).cols() != side)
      throw ShapeError("operator block " + std::to_string(k) + " has wrong dimensions");
  }
}

AdjointableOperator AdjointableOperator::zero(const AlgebraShape &shape, Index truncation)
{
  std::vector<CMatrix> blocks;
  for (Index d : shape.dims())
    blocks.push_back(CMatrix::Zero(truncation * d, truncation * d));
  return AdjointableOperator(shape, truncation, std::move(blocks), OperatorKind::dense, 0);
}

AdjointableOperator AdjointableOperator::identity(const AlgebraShape &shape, Index truncation)
{
  std::vector<CMatrix> blocks;
  for (Index d : shape.dims())
    blocks.push_back(CMatrix::Identity(truncation * d, truncation * d));
  return AdjointableOperator(shape, truncation, std::move(blocks), OperatorKind::identity);
}

AdjointableOperator AdjointableOperator::diagonal(const AlgebraShape &shape, std::span<const Element> entries)
{
  const Index n = static_cast<Index>(entries.size());
  std::vector<CMatrix> blocks;
  for (Index k = 0; k < shape.blocks(); ++k) {
    Index d = shape.dim(k);
    CMatrix t = CMatrix::Zero(n * d, n * d);
    for (Index j = 0; j < n; ++j) {
      require_same_shape(shape, entries[static_cast<std::size_t>(j)].shape(), "diagonal operator");
      t.block(j * d, j * d, d, d) = entries[static_cast<std::size_t>(j)].block(k);
    }
    blocks.push_back(std::move(t));
  }
  return AdjointableOperator(shape, n, std::move(blocks), OperatorKind::diagonal);
}

AdjointableOperator AdjointableOperator::diagonal(const AlgebraShape &shape, std::span<const cplx> entries)
{
  std::vector<Element> elems;
  for (cplx c : entries)
    elems.push_back(Element::scalar(shape, c));
  return diagonal(shape, std::span<const Element>(elems));
}

AdjointableOperator AdjointableOperator::theta(std::span<const ModuleVector> ys, std::span<const ModuleVector> zs)
{
  if (ys.empty() || ys.size() != zs.size())
    throw PreconditionError("theta combination needs at least one term and as many z as y vectors");
  const ModuleVector &first = ys.front();
  std::vector<CMatrix> blocks;
  for (Index k = 0; k < first.shape().blocks(); ++k)
    blocks.push_back(CMatrix::Zero(first.stack(k).rows(), first.stack(k).rows()));
  Index support = 0;
  for (std::size_t i = 0; i < ys.size(); ++i) {
    ys[i].require_compatible(first, "theta combination");
    zs[i].require_compatible(first, "theta combination");
    for (Index k = 0; k < first.shape().blocks(); ++k)
      blocks[static_cast<std::size_t>(k)].noalias() += ys[i].stack(k) * zs[i].stack(k).adjoint();
    support = std::max(support, support_end(ys[i]));
  }
  return AdjointableOperator(first.shape(), first.truncation(), std::move(blocks), OperatorKind::theta, support);
}

AdjointableOperator AdjointableOperator::from_entries(const AlgebraShape &shape,
                                                      const std::vector<std::vector<Element>> &entries)
{
  const Index n = static_cast<Index>(entries.size());
  std::vector<CMatrix> blocks;
  for (Index k = 0; k < shape.blocks(); ++k) {
    Index d = shape.dim(k);
    CMatrix t(n * d, n * d);
    for (Index i = 0; i < n; ++i) {
      const auto &row = entries[static_cast<std::size_t>(i)];
      if (static_cast<Index>(row.size()) != n)
        throw ShapeError("operator entries must form a square array");
      for (Index j = 0; j < n; ++j) {
        require_same_shape(shape, row[static_cast<std::size_t>(j)].shape(), "operator entry");
        t.block(i * d, j * d, d, d) = row[static_cast<std::size_t>(j)].block(k);
      }
    }
    blocks.push_back(std::move(t));
  }
  return AdjointableOperator(shape, n, std::move(blocks));
}

AdjointableOperator AdjointableOperator::random(const AlgebraShape &shape, Index truncation, Rng &rng)
{
  std::vector<CMatrix> blocks;
  for (Index d : shape.dims())
    blocks.push_back(gaussian_matrix<cplx>(truncation * d, truncation * d, rng));
  AdjointableOperator t(shape, truncation, std::move(blocks), OperatorKind::random);
  double norm = op_norm(t);
  for (auto &b : t.blocks_)
    b /= norm;
  return t;
}

Element AdjointableOperator::entry(Index i, Index j) const
{
  if (i < 0 || j < 0 || i >= n_ || j >= n_)
    throw ShapeError("operator entry index out of range");
  Element e(shape_);
  for (Index k = 0; k < shape_.blocks(); ++k) {
    Index d = shape_.dim(k);
    e.block(k) = block(k).block(i * d, j * d, d, d);
  }
  return e;
}

void AdjointableOperator::require_compatible(const AdjointableOperator &other, const char *what) const
{
  require_same_shape(shape_, other.shape_, what);
  if (n_ != other.n_)
    throw ShapeError(std::string(what) + ": truncation mismatch (" + std::to_string(n_) + " vs " +
                     std::to_string(other.n_) + ")");
}

ModuleVector op_apply(const AdjointableOperator &t, const ModuleVector &x)
{
  require_same_shape(t.shape(), x.shape(), "op_apply");
  if (t.truncation() != x.truncation())
    throw ShapeError("op_apply: truncation mismatch");
  ModuleVector out(x.shape(), x.truncation());
  for (Index k = 0; k < x.shape().blocks(); ++k)
    out.stack(k).noalias() = t.block(k) * x.stack(k);
  return out;
}

AdjointableOperator op_adjoint(const AdjointableOperator &t)
{
  std::vector<CMatrix> blocks;
  for (const auto &b : t.blocks())
    blocks.push_back(b.adjoint());
  auto kind = t.kind() == OperatorKind::identity || t.kind() == OperatorKind::diagonal ? t.kind()
                                                                                        : OperatorKind::dense;
  return AdjointableOperator(t.shape(), t.truncation(), std::move(blocks), kind);
}

double op_norm(const AdjointableOperator &t)
{
  double norm = 0;
  for (const auto &b : t.blocks())
    norm = std::max(norm, spectral_norm(b));
  return norm;
}

AdjointableOperator tail_operator(const AdjointableOperator &t, Index n)
{
  if (n < 0 || n > t.truncation())
    throw ShapeError("tail_operator: level " + std::to_string(n) + " outside [0, " +
                     std::to_string(t.truncation()) + "]");
  std::vector<CMatrix> blocks = t.blocks();
  for (Index k = 0; k < t.shape().blocks(); ++k)
    blocks[static_cast<std::size_t>(k)].topRows(n * t.shape().dim(k)).setZero();
  return AdjointableOperator(t.shape(), t.truncation(), std::move(blocks));
}

AdjointableOperator operator+(const AdjointableOperator &a, const AdjointableOperator &b)
{
  a.require_compatible(b, "operator sum");
  std::vector<CMatrix> blocks;
  for (Index k = 0; k < a.shape().blocks(); ++k)
    blocks.push_back(a.block(k) + b.block(k));
  std::optional<Index> support;
  if (a.support() && b.support())
    support = std::max(*a.support(), *b.support());
  return AdjointableOperator(a.shape(), a.truncation(), std::move(blocks), OperatorKind::dense, support);
}

AdjointableOperator operator-(const AdjointableOperator &a, const AdjointableOperator &b)
{
  return a + cplx(-1) * b;
}

AdjointableOperator operator*(cplx c, const AdjointableOperator &a)
{
  std::vector<CMatrix> blocks;
  for (const auto &b : a.blocks())
    blocks.push_back(c * b);
  auto kind = a.kind() == OperatorKind::identity ? OperatorKind::diagonal : a.kind();
  return AdjointableOperator(a.shape(), a.truncation(), std::move(blocks), kind, a.support());
}

AdjointableOperator projection_operator(const Projection &q, const AlgebraShape &shape, Index truncation)
{
  return AdjointableOperator(shape, truncation, q.dense(shape, truncation));
}

const char *to_string(OperatorKind kind)
{
  switch (kind) {
  case OperatorKind::dense:
    return "dense";
  case OperatorKind::identity:
    return "identity";
  case OperatorKind::diagonal:
    return "diagonal";
  case OperatorKind::theta:
    return "theta";
  case OperatorKind::random:
    return "random";
  }
  return "?";
}

} // namespace hmnc
