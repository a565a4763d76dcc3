#pragma once

#include <Eigen/Dense>
#include <Eigen/SVD>

#include <algorithm>
#include <complex>
#include <random>

namespace hmnc {

using Index = Eigen::Index;
using Rng = std::mt19937_64;

template <typename Scalar>
using DenseMatrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

// Largest singular value. Jacobi for small operands, divide-and-conquer above.
template <typename Derived>
typename Derived::RealScalar spectral_norm(const Eigen::MatrixBase<Derived> &m)
{
  using Real = typename Derived::RealScalar;
  if (m.rows() == 0 || m.cols() == 0)
    return Real(0);
  using M = DenseMatrix<typename Derived::Scalar>;
  if (std::min(m.rows(), m.cols()) <= 16) {
    Eigen::JacobiSVD<M> svd(m.eval());
    return svd.singularValues()(0);
  }
  Eigen::BDCSVD<M> svd(m.eval());
  return svd.singularValues()(0);
}

template <typename Derived>
typename Derived::RealScalar hermitian_defect(const Eigen::MatrixBase<Derived> &m)
{
  if (m.size() == 0)
    return 0;
  return spectral_norm(m - m.adjoint());
}

// Standard normal draw; complex scalars get independent real and imaginary parts.
template <typename Scalar> Scalar gaussian(Rng &rng)
{
  using Real = typename Eigen::NumTraits<Scalar>::Real;
  std::normal_distribution<Real> nd(0, 1);
  if constexpr (Eigen::NumTraits<Scalar>::IsComplex) {
    Real re = nd(rng);
    Real im = nd(rng);
    return Scalar(re, im);
  } else {
    return nd(rng);
  }
}

template <typename Scalar> DenseMatrix<Scalar> gaussian_matrix(Index rows, Index cols, Rng &rng)
{
  DenseMatrix<Scalar> m(rows, cols);
  for (Index j = 0; j < cols; ++j)
    for (Index i = 0; i < rows; ++i)
      m(i, j) = gaussian<Scalar>(rng);
  return m;
}

// Haar-distributed unitary of order n (QR of a Gaussian matrix, phases fixed).
template <typename Scalar> DenseMatrix<Scalar> haar_unitary(Index n, Rng &rng)
{
  using std::abs;
  DenseMatrix<Scalar> g = gaussian_matrix<Scalar>(n, n, rng);
  Eigen::HouseholderQR<DenseMatrix<Scalar>> qr(g);
  DenseMatrix<Scalar> q = qr.householderQ();
  DenseMatrix<Scalar> r = qr.matrixQR().template triangularView<Eigen::Upper>();
  for (Index j = 0; j < n; ++j) {
    auto d = r(j, j);
    if (abs(d) > 0)
      q.col(j) *= d / abs(d);
  }
  return q;
}

} // namespace hmnc
