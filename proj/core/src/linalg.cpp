// Copyright 2026 The nepcontour Authors. All Rights Reserved.
// SPDX-License-Identifier: Apache-2.0

#include "nepcontour/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "nepcontour/error.hpp"

namespace nepcontour
{

namespace
{

constexpr double kQrRankTol = 1.0e-14;
constexpr double kParallelTol = 1.0e-8;

// Orders by real part then imaginary part.
bool LexLess(Complex a, Complex b)
{
  if (a.real() != b.real())
  {
    return a.real() < b.real();
  }
  return a.imag() < b.imag();
}

}  // namespace

SvdResult SvdFiltered(const Matrix &a, double tol_rel)
{
  if (a.size() == 0)
  {
    throw Error(ErrorCode::InvalidParameter, "SVD of an empty matrix");
  }
  if (!(tol_rel > 0.0 && tol_rel < 1.0))
  {
    throw Error(ErrorCode::InvalidParameter, "SVD filter tolerance must lie in (0, 1)");
  }
  if (!a.allFinite())
  {
    throw Error(ErrorCode::InvalidParameter, "SVD input has non-finite entries");
  }
  Eigen::JacobiSVD<Matrix> svd(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const RealVector &sigma = svd.singularValues();
  const double cutoff = tol_rel * (sigma.size() > 0 ? sigma(0) : 0.0);
  Index rank = 0;
  while (rank < sigma.size() && sigma(rank) > cutoff)
  {
    rank++;
  }
  if (rank == 0)
  {
    throw Error(ErrorCode::EmptySubspace,
                "all singular values were filtered; no eigenvalues detected in the probed "
                "subspace");
  }
  return {svd.matrixU().leftCols(rank), sigma.head(rank), svd.matrixV().leftCols(rank)};
}

QrResult QrThin(const Matrix &a)
{
  const Index n = a.rows(), m = a.cols();
  if (m == 0 || n < m)
  {
    throw Error(ErrorCode::InvalidParameter, "thin QR needs rows >= cols >= 1");
  }
  Eigen::HouseholderQR<Matrix> qr(a);
  Matrix q = qr.householderQ() * Matrix::Identity(n, m);
  Matrix r = qr.matrixQR().topRows(m).triangularView<Eigen::Upper>();

  const double floor = kQrRankTol * a.norm();
  for (Index i = 0; i < m; i++)
  {
    const double mag = std::abs(r(i, i));
    if (!(mag > floor))
    {
      std::ostringstream os;
      os << "QR of a numerically rank-deficient block (|r_" << i << i << "| = " << mag
         << "); use the SVD linearization";
      throw Error(ErrorCode::RankDeficient, os.str());
    }
    // Rotate column i of q and row i of r so r_ii is real and positive.
    const Complex phase = r(i, i) / mag;
    q.col(i) *= phase;
    r.row(i) *= std::conj(phase);
    r(i, i) = mag;
  }
  return {std::move(q), std::move(r)};
}

EigResult DenseEig(const Matrix &b, std::optional<Complex> center)
{
  if (b.rows() != b.cols() || b.rows() == 0)
  {
    throw Error(ErrorCode::InvalidParameter, "dense eigensolve needs a nonempty square matrix");
  }
  Eigen::ComplexEigenSolver<Matrix> es(b, true);
  if (es.info() != Eigen::Success)
  {
    std::ostringstream os;
    os << "complex eigensolver did not converge on a " << b.rows() << "x" << b.cols()
       << " matrix (||B||_F = " << b.norm() << ")";
    throw Error(ErrorCode::NonConvergence, os.str());
  }
  const Index k = b.rows();
  const Vector &lambda = es.eigenvalues();
  std::vector<Index> order(k);
  std::iota(order.begin(), order.end(), Index{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](Index i, Index j)
                   {
                     if (center)
                     {
                       const double di = std::abs(lambda(i) - *center);
                       const double dj = std::abs(lambda(j) - *center);
                       if (di != dj)
                       {
                         return di < dj;
                       }
                     }
                     return LexLess(lambda(i), lambda(j));
                   });

  EigResult out;
  out.values.resize(k);
  out.vectors.resize(k, k);
  for (Index i = 0; i < k; i++)
  {
    out.values(i) = lambda(order[i]);
    out.vectors.col(i) = es.eigenvectors().col(order[i]).normalized();
  }
  for (Index i = 0; i < k; i++)
  {
    for (Index j = i + 1; j < k; j++)
    {
      if (std::abs(out.vectors.col(i).dot(out.vectors.col(j))) > 1.0 - kParallelTol)
      {
        out.near_parallel.emplace_back(i, j);
      }
    }
  }
  return out;
}

Matrix TriangularSolveRight(const Matrix &m, const Matrix &r)
{
  if (r.rows() != r.cols() || m.cols() != r.rows())
  {
    throw Error(ErrorCode::InvalidParameter, "triangular solve: dimension mismatch");
  }
  for (Index i = 0; i < r.rows(); i++)
  {
    if (r(i, i) == Complex(0.0))
    {
      throw Error(ErrorCode::SingularTriangular,
                  "triangular factor has a zero diagonal entry at " + std::to_string(i));
    }
  }
  Matrix x = m;
  r.triangularView<Eigen::Upper>().solveInPlace<Eigen::OnTheRight>(x);
  return x;
}

Matrix RandomComplexGaussian(Index rows, Index cols, std::mt19937_64 &rng)
{
  std::normal_distribution<double> normal(0.0, std::sqrt(0.5));
  Matrix out(rows, cols);
  // Column-major fill keeps the stream order independent of Eigen internals.
  for (Index j = 0; j < cols; j++)
  {
    for (Index i = 0; i < rows; i++)
    {
      const double re = normal(rng);
      const double im = normal(rng);
      out(i, j) = Complex(re, im);
    }
  }
  return out;
}

}  // namespace nepcontour
