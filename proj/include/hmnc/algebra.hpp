#pragma once

// Finite-dimensional C*-algebras A = M_{d_1}(C) ⊕ ... ⊕ M_{d_K}(C).
//
// Elements are stored block by block; every operation acts blockwise, and the
// C*-norm is the largest spectral norm over the blocks.

#include "hmnc/errors.hpp"
#include "hmnc/linalg.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <complex>
#include <limits>
#include <numeric>
#include <sstream>
#include <string>
#include <type_traits>
#include <utility>
#include <vector>

namespace hmnc {

class AlgebraShape {
public:
  AlgebraShape() : dims_{1} {}
  explicit AlgebraShape(std::vector<Index> block_dims) : dims_(std::move(block_dims))
  {
    if (dims_.empty())
      throw ShapeError("algebra shape needs at least one block");
    for (Index d : dims_)
      if (d < 1)
        throw ShapeError("algebra block sizes must be positive");
  }
  AlgebraShape(std::initializer_list<Index> block_dims) : AlgebraShape(std::vector<Index>(block_dims)) {}

  static AlgebraShape scalars() { return AlgebraShape(); }

  Index blocks() const { return static_cast<Index>(dims_.size()); }
  Index dim(Index k) const { return dims_[static_cast<std::size_t>(k)]; }
  Index total_dim() const { return std::accumulate(dims_.begin(), dims_.end(), Index(0)); }
  const std::vector<Index> &dims() const { return dims_; }

  std::string str() const
  {
    std::ostringstream os;
    for (std::size_t k = 0; k < dims_.size(); ++k)
      os << (k ? "+" : "") << "M" << dims_[k];
    return os.str();
  }

  bool operator==(const AlgebraShape &) const = default;

private:
  std::vector<Index> dims_;
};

inline void require_same_shape(const AlgebraShape &a, const AlgebraShape &b, const char *what)
{
  if (!(a == b))
    throw ShapeError(std::string(what) + ": shape mismatch (" + a.str() + " vs " + b.str() + ")");
}

template <typename Scalar> class BasicElement {
public:
  using Matrix = DenseMatrix<Scalar>;
  using Real = typename Eigen::NumTraits<Scalar>::Real;

  BasicElement() : BasicElement(AlgebraShape()) {}

  explicit BasicElement(AlgebraShape shape) : shape_(std::move(shape))
  {
    blocks_.reserve(static_cast<std::size_t>(shape_.blocks()));
    for (Index d : shape_.dims())
      blocks_.push_back(Matrix::Zero(d, d));
  }

  BasicElement(AlgebraShape shape, std::vector<Matrix> blocks) : shape_(std::move(shape)), blocks_(std::move(blocks))
  {
    if (static_cast<Index>(blocks_.size()) != shape_.blocks())
      throw ShapeError("element block count does not match algebra shape");
    for (Index k = 0; k < shape_.blocks(); ++k)
      if (block(k).rows() != shape_.dim(k) || block(k).cols() != shape_.dim(k))
        throw ShapeError("element block " + std::to_string(k) + " has wrong dimensions");
  }

  static BasicElement zero(const AlgebraShape &shape) { return BasicElement(shape); }

  static BasicElement identity(const AlgebraShape &shape) { return scalar(shape, Scalar(1)); }

  static BasicElement scalar(const AlgebraShape &shape, Scalar c)
  {
    BasicElement e(shape);
    for (Index k = 0; k < shape.blocks(); ++k)
      e.block(k) = c * Matrix::Identity(shape.dim(k), shape.dim(k));
    return e;
  }

  const AlgebraShape &shape() const { return shape_; }
  const Matrix &block(Index k) const { return blocks_[static_cast<std::size_t>(k)]; }
  Matrix &block(Index k) { return blocks_[static_cast<std::size_t>(k)]; }
  const std::vector<Matrix> &blocks() const { return blocks_; }

  BasicElement &operator+=(const BasicElement &o)
  {
    require_same_shape(shape_, o.shape_, "element +");
    for (std::size_t k = 0; k < blocks_.size(); ++k)
      blocks_[k] += o.blocks_[k];
    return *this;
  }
  BasicElement &operator-=(const BasicElement &o)
  {
    require_same_shape(shape_, o.shape_, "element -");
    for (std::size_t k = 0; k < blocks_.size(); ++k)
      blocks_[k] -= o.blocks_[k];
    return *this;
  }
  BasicElement &operator*=(Scalar c)
  {
    for (auto &b : blocks_)
      b *= c;
    return *this;
  }

private:
  AlgebraShape shape_;
  std::vector<Matrix> blocks_;
};

template <typename Scalar> BasicElement<Scalar> operator+(BasicElement<Scalar> a, const BasicElement<Scalar> &b)
{
  return a += b;
}
template <typename Scalar> BasicElement<Scalar> operator-(BasicElement<Scalar> a, const BasicElement<Scalar> &b)
{
  return a -= b;
}
template <typename Scalar> BasicElement<Scalar> operator-(BasicElement<Scalar> a) { return a *= Scalar(-1); }
template <typename Scalar> BasicElement<Scalar> operator*(std::type_identity_t<Scalar> c, BasicElement<Scalar> a) { return a *= c; }

template <typename Scalar>
BasicElement<Scalar> alg_mul(const BasicElement<Scalar> &a, const BasicElement<Scalar> &b)
{
  require_same_shape(a.shape(), b.shape(), "alg_mul");
  BasicElement<Scalar> out(a.shape());
  for (Index k = 0; k < a.shape().blocks(); ++k)
    out.block(k).noalias() = a.block(k) * b.block(k);
  return out;
}

template <typename Scalar> BasicElement<Scalar> operator*(const BasicElement<Scalar> &a, const BasicElement<Scalar> &b)
{
  return alg_mul(a, b);
}

template <typename Scalar> BasicElement<Scalar> alg_adjoint(const BasicElement<Scalar> &a)
{
  BasicElement<Scalar> out(a.shape());
  for (Index k = 0; k < a.shape().blocks(); ++k)
    out.block(k) = a.block(k).adjoint();
  return out;
}

/// C*-norm: the largest spectral norm over the blocks.
template <typename Scalar> typename BasicElement<Scalar>::Real alg_norm(const BasicElement<Scalar> &a)
{
  typename BasicElement<Scalar>::Real n = 0;
  for (const auto &b : a.blocks())
    n = std::max(n, spectral_norm(b));
  return n;
}

template <typename Scalar>
typename BasicElement<Scalar>::Real distance(const BasicElement<Scalar> &a, const BasicElement<Scalar> &b)
{
  return alg_norm(a - b);
}

template <typename Scalar> typename BasicElement<Scalar>::Real hermitian_defect(const BasicElement<Scalar> &a)
{
  typename BasicElement<Scalar>::Real d = 0;
  for (const auto &b : a.blocks())
    d = std::max(d, hermitian_defect(b));
  return d;
}

// Largest blockwise ‖a a* − a* a‖.
template <typename Scalar> typename BasicElement<Scalar>::Real normality_defect(const BasicElement<Scalar> &a)
{
  typename BasicElement<Scalar>::Real d = 0;
  for (const auto &b : a.blocks())
    d = std::max(d, spectral_norm(b * b.adjoint() - b.adjoint() * b));
  return d;
}

template <typename Scalar> typename BasicElement<Scalar>::Real unitarity_defect(const BasicElement<Scalar> &a)
{
  typename BasicElement<Scalar>::Real d = 0;
  for (const auto &b : a.blocks()) {
    auto id = DenseMatrix<Scalar>::Identity(b.rows(), b.cols());
    d = std::max({d, spectral_norm(b.adjoint() * b - id), spectral_norm(b * b.adjoint() - id)});
  }
  return d;
}

/// Smallest eigenvalue of the Hermitian part, over all blocks.
template <typename Scalar> typename BasicElement<Scalar>::Real min_eigenvalue(const BasicElement<Scalar> &a)
{
  using Real = typename BasicElement<Scalar>::Real;
  Real lo = std::numeric_limits<Real>::infinity();
  for (const auto &b : a.blocks()) {
    DenseMatrix<Scalar> h = (b + b.adjoint()) / Real(2);
    Eigen::SelfAdjointEigenSolver<DenseMatrix<Scalar>> es(h, Eigen::EigenvaluesOnly);
    lo = std::min(lo, es.eigenvalues()(0));
  }
  return lo;
}

/// True iff a is Hermitian within tol and its spectrum lies in [−tol, ∞).
template <typename Scalar> bool is_positive(const BasicElement<Scalar> &a, typename BasicElement<Scalar>::Real tol)
{
  return hermitian_defect(a) <= tol && min_eigenvalue(a) >= -tol;
}

template <typename Scalar> BasicElement<Scalar> random_element(const AlgebraShape &shape, Rng &rng)
{
  BasicElement<Scalar> e(shape);
  for (Index k = 0; k < shape.blocks(); ++k)
    e.block(k) = gaussian_matrix<Scalar>(shape.dim(k), shape.dim(k), rng);
  return e;
}

template <typename Scalar> BasicElement<Scalar> random_hermitian(const AlgebraShape &shape, Rng &rng)
{
  auto a = random_element<Scalar>(shape, rng);
  return typename BasicElement<Scalar>::Real(0.5) * (a + alg_adjoint(a));
}

/// Blockwise Haar unitary, a pure function of the seed.
template <typename Scalar> BasicElement<Scalar> random_unitary(const AlgebraShape &shape, std::uint64_t seed)
{
  Rng rng(seed);
  BasicElement<Scalar> u(shape);
  for (Index k = 0; k < shape.blocks(); ++k)
    u.block(k) = haar_unitary<Scalar>(shape.dim(k), rng);
  return u;
}

/// Normal element U D U* with Gaussian complex spectrum D.
template <typename Scalar> BasicElement<Scalar> random_normal(const AlgebraShape &shape, Rng &rng)
{
  BasicElement<Scalar> a(shape);
  for (Index k = 0; k < shape.blocks(); ++k) {
    Index d = shape.dim(k);
    DenseMatrix<Scalar> u = haar_unitary<Scalar>(d, rng);
    DenseMatrix<Scalar> diag = DenseMatrix<Scalar>::Zero(d, d);
    for (Index i = 0; i < d; ++i)
      diag(i, i) = gaussian<Scalar>(rng);
    a.block(k) = u * diag * u.adjoint();
  }
  return a;
}

// ---------------------------------------------------------------------------
// States

/// Positive unit-trace functional φ(a) = Σ_k tr(ρ_k a_k).
template <typename Scalar> class BasicState {
public:
  using Matrix = DenseMatrix<Scalar>;
  using Real = typename Eigen::NumTraits<Scalar>::Real;

  static constexpr Real default_psd_tol = Real(1e-9);
  static constexpr Real trace_tol = Real(1e-12);

  BasicState(AlgebraShape shape, std::vector<Matrix> densities, Real psd_tol = default_psd_tol)
      : shape_(std::move(shape)), densities_(std::move(densities))
  {
    if (static_cast<Index>(densities_.size()) != shape_.blocks())
      throw ShapeError("state density count does not match algebra shape");
    Scalar trace(0);
    for (Index k = 0; k < shape_.blocks(); ++k) {
      const Matrix &rho = densities_[static_cast<std::size_t>(k)];
      if (rho.rows() != shape_.dim(k) || rho.cols() != shape_.dim(k))
        throw ShapeError("state density " + std::to_string(k) + " has wrong dimensions");
      if (hermitian_defect(rho) > psd_tol)
        throw NumericalError("state density " + std::to_string(k) + " is not Hermitian");
      Eigen::SelfAdjointEigenSolver<Matrix> es(rho, Eigen::EigenvaluesOnly);
      if (es.eigenvalues()(0) < -psd_tol)
        throw NumericalError("state density " + std::to_string(k) + " is not positive semidefinite");
      trace += rho.trace();
    }
    using std::abs;
    if (abs(trace - Scalar(1)) > trace_tol)
      throw NumericalError("state densities must have total trace 1");
  }

  /// Vector state a ↦ ⟨v, a_block v⟩ for a unit vector v.
  static BasicState vector_state(const AlgebraShape &shape, Index block, const Eigen::Matrix<Scalar, Eigen::Dynamic, 1> &v)
  {
    std::vector<Matrix> dens;
    for (Index k = 0; k < shape.blocks(); ++k)
      dens.push_back(Matrix::Zero(shape.dim(k), shape.dim(k)));
    auto unit = v / v.norm();
    dens[static_cast<std::size_t>(block)] = unit * unit.adjoint();
    return BasicState(shape, std::move(dens));
  }

  /// Normalized trace over the whole algebra.
  static BasicState tracial(const AlgebraShape &shape)
  {
    std::vector<Matrix> dens;
    Real scale = Real(1) / static_cast<Real>(shape.total_dim());
    for (Index d : shape.dims())
      dens.push_back(scale * Matrix::Identity(d, d));
    return BasicState(shape, std::move(dens));
  }

  static BasicState random(const AlgebraShape &shape, Rng &rng)
  {
    std::vector<Matrix> dens;
    Real total = 0;
    std::uniform_int_distribution<int> coin(0, 2);
    for (Index d : shape.dims()) {
      // Mix of full-rank, rank-one and absent blocks keeps vector states in play.
      int mode = coin(rng);
      Index rank = mode == 0 ? 0 : (mode == 1 ? 1 : d);
      Matrix g = gaussian_matrix<Scalar>(d, rank, rng);
      Matrix rho = g * g.adjoint();
      total += std::real(rho.trace());
      dens.push_back(rho);
    }
    if (total <= 0) {
      Matrix g = gaussian_matrix<Scalar>(shape.dim(0), 1, rng);
      dens[0] = g * g.adjoint();
      total = std::real(dens[0].trace());
    }
    for (auto &rho : dens) {
      rho /= total;
      rho = (rho + rho.adjoint()).eval() / Real(2);
    }
    return BasicState(shape, std::move(dens));
  }

  Scalar operator()(const BasicElement<Scalar> &a) const
  {
    require_same_shape(shape_, a.shape(), "state evaluation");
    Scalar acc(0);
    for (Index k = 0; k < shape_.blocks(); ++k)
      acc += (densities_[static_cast<std::size_t>(k)].transpose().cwiseProduct(a.block(k))).sum();
    return acc;
  }

  /// φ^u(a) = φ(u* a u), i.e. ρ ↦ u ρ u*.
  BasicState conjugated(const BasicElement<Scalar> &u) const
  {
    require_same_shape(shape_, u.shape(), "state conjugation");
    std::vector<Matrix> dens;
    for (Index k = 0; k < shape_.blocks(); ++k) {
      Matrix r = u.block(k) * densities_[static_cast<std::size_t>(k)] * u.block(k).adjoint();
      dens.push_back((r + r.adjoint()) / Real(2));
    }
    return BasicState(shape_, std::move(dens));
  }

  const AlgebraShape &shape() const { return shape_; }
  const Matrix &density(Index k) const { return densities_[static_cast<std::size_t>(k)]; }
  const std::vector<Matrix> &densities() const { return densities_; }

private:
  AlgebraShape shape_;
  std::vector<Matrix> densities_;
};

/// State attaining the norm of a normal element: |φ(a)| ≥ ‖a‖ − tol.
///
/// The block attaining the norm is eigendecomposed and φ is the vector state of
/// an eigenvector whose eigenvalue has maximal modulus. Ties go to the lowest
/// block index, then to the lowest eigenvector index of the solver.
template <typename Scalar>
BasicState<Scalar> norming_state(const BasicElement<Scalar> &a, typename BasicElement<Scalar>::Real tol = 1e-9)
{
  using Real = typename BasicElement<Scalar>::Real;
  using Matrix = DenseMatrix<Scalar>;
  using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
  using std::abs;

  const Real norm = alg_norm(a);
  const Real defect = normality_defect(a);
  if (defect > tol * std::max(Real(1), norm * norm)) {
    std::ostringstream os;
    os << "norming_state: element is not normal (‖aa* − a*a‖ = " << defect << ", tol " << tol << ")";
    throw NumericalError(os.str());
  }

  const Real tie = Real(1e-12) * std::max(Real(1), norm);
  const AlgebraShape &shape = a.shape();
  for (Index k = 0; k < shape.blocks(); ++k) {
    const Matrix &b = a.block(k);
    std::vector<std::pair<Scalar, Vector>> eig;
    if (hermitian_defect(b) <= tol) {
      Eigen::SelfAdjointEigenSolver<Matrix> es((b + b.adjoint()) / Real(2));
      for (Index i = 0; i < b.rows(); ++i)
        eig.emplace_back(Scalar(es.eigenvalues()(i)), es.eigenvectors().col(i));
    } else if constexpr (Eigen::NumTraits<Scalar>::IsComplex) {
      Eigen::ComplexEigenSolver<Matrix> es(b);
      for (Index i = 0; i < b.rows(); ++i)
        eig.emplace_back(es.eigenvalues()(i), es.eigenvectors().col(i));
    } else {
      throw NumericalError("norming_state: non-symmetric real blocks are not supported");
    }
    for (const auto &[mu, v] : eig)
      if (abs(mu) >= norm - tie)
        return BasicState<Scalar>::vector_state(shape, k, v);
  }
  // Only reachable when rounding separates the eigenvalues from the norm by more
  // than the tie width; fall back to the overall largest modulus.
  Index best_k = 0;
  Vector best_v = Vector::Unit(shape.dim(0), 0);
  Real best = -1;
  for (Index k = 0; k < shape.blocks(); ++k) {
    Eigen::ComplexEigenSolver<DenseMatrix<std::complex<Real>>> es(a.block(k).template cast<std::complex<Real>>());
    for (Index i = 0; i < a.block(k).rows(); ++i)
      if (abs(es.eigenvalues()(i)) > best) {
        best = abs(es.eigenvalues()(i));
        best_k = k;
        if constexpr (Eigen::NumTraits<Scalar>::IsComplex)
          best_v = es.eigenvectors().col(i);
        else
          best_v = es.eigenvectors().col(i).real();
      }
  }
  return BasicState<Scalar>::vector_state(shape, best_k, best_v);
}

} // namespace hmnc
