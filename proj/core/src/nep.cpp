// Copyright 2026 The nepcontour Authors. All Rights Reserved.
// SPDX-License-Identifier: Apache-2.0

#include "nepcontour/nep.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <sstream>

#include "nepcontour/error.hpp"

namespace nepcontour
{

namespace
{

std::string FormatComplex(Complex z)
{
  std::ostringstream os;
  os.precision(17);
  os << z.real() << (z.imag() < 0 ? "" : "+") << z.imag() << "i";
  return os.str();
}

class DenseLuFactorization final : public Factorization
{
public:
  explicit DenseLuFactorization(Eigen::PartialPivLU<Matrix> lu) : lu_(std::move(lu)) {}

  Matrix Solve(const Matrix &rhs) const override { return lu_.solve(rhs); }

private:
  Eigen::PartialPivLU<Matrix> lu_;
};

}  // namespace

Matrix NepProblem::Apply(Complex z, const Matrix &x) const
{
  return Evaluate(z) * x;
}

double NepProblem::FrobeniusNormAt(Complex z) const
{
  return Evaluate(z).norm();
}

std::unique_ptr<Factorization> NepProblem::Factorize(Complex z) const
{
  return FactorizeDense(Evaluate(z), z);
}

std::unique_ptr<Factorization> FactorizeDense(const Matrix &t, Complex z)
{
  if (!t.allFinite())
  {
    throw Error(ErrorCode::NodeSingular, "T(z) has non-finite entries at z = " + FormatComplex(z));
  }
  Eigen::PartialPivLU<Matrix> lu(t);
  // rcond() is not reliable once a pivot is exactly zero, so look at the pivots too.
  const RealVector pivots = lu.matrixLU().diagonal().cwiseAbs();
  const double rcond = pivots.minCoeff() > 0.0 && pivots.allFinite() ? lu.rcond() : 0.0;
  if (!(rcond > std::numeric_limits<double>::epsilon()))
  {
    std::ostringstream os;
    os << "T(z) is numerically singular at quadrature node z = " << FormatComplex(z)
       << " (rcond " << rcond << "); the node is on or too close to an eigenvalue";
    throw Error(ErrorCode::NodeSingular, os.str());
  }
  return std::make_unique<DenseLuFactorization>(std::move(lu));
}

double Residual(const NepProblem &problem, Complex lambda, const Vector &x)
{
  if (x.size() != problem.Dimension())
  {
    throw Error(ErrorCode::InvalidParameter, "residual: vector length does not match dimension");
  }
  const double xnorm = x.norm();
  if (!(xnorm > 0.0))
  {
    throw Error(ErrorCode::InvalidParameter, "residual: zero vector");
  }
  if (problem.Dimension() == 1)
  {
    // ||T x|| / ||T||_F is identically 1 for a scalar T, so use the absolute value there.
    return std::abs(problem.Apply(lambda, x / xnorm)(0, 0));
  }
  const double tnorm = problem.FrobeniusNormAt(lambda);
  if (!(tnorm > 0.0))
  {
    throw Error(ErrorCode::DegenerateProblem,
                "||T(lambda)||_F = 0 at lambda = " + FormatComplex(lambda));
  }
  const Matrix tx = problem.Apply(lambda, x / xnorm);
  return tx.norm() / tnorm;
}

Matrix ComputeBlockResidual(const NepProblem &problem, std::span<const Complex> values,
                            const Matrix &vectors)
{
  if (values.empty() || vectors.cols() != static_cast<Index>(values.size()))
  {
    throw Error(ErrorCode::InvalidParameter,
                "block residual: need one vector per eigenvalue and at least one pair");
  }
  if (vectors.rows() != problem.Dimension())
  {
    throw Error(ErrorCode::InvalidParameter,
                "block residual: vector length does not match problem dimension");
  }
  Matrix out(vectors.rows(), vectors.cols());
  for (Index i = 0; i < vectors.cols(); i++)
  {
    out.col(i) = problem.Apply(values[i], vectors.col(i));
  }
  return out;
}

BlockResidual ComputeBlockResidual(const NepProblem &problem, const EigenpairSet &pairs)
{
  return {ComputeBlockResidual(problem, pairs.values, pairs.vectors)};
}

EigenpairSet Finalize(EigenpairSet pairs, const NepProblem &problem,
                      const std::optional<Contour> &contour)
{
  EigenpairSet out;
  out.warnings = std::move(pairs.warnings);
  std::vector<Index> keep;
  for (Index i = 0; i < pairs.Size(); i++)
  {
    const double norm = pairs.vectors.col(i).norm();
    if (!(norm > 0.0) || !std::isfinite(norm))
    {
      out.warnings.push_back("dropped pair " + std::to_string(i) + " (lambda = " +
                             FormatComplex(pairs.values[i]) + "): zero eigenvector");
      continue;
    }
    keep.push_back(i);
  }

  const Index n = pairs.vectors.rows();
  const Index m = static_cast<Index>(keep.size());
  Matrix vectors(n, m);
  std::vector<Complex> values(m);
  std::vector<double> residuals(m);
  for (Index k = 0; k < m; k++)
  {
    const Index i = keep[k];
    vectors.col(k) = pairs.vectors.col(i) / pairs.vectors.col(i).norm();
    values[k] = pairs.values[i];
    residuals[k] = Residual(problem, values[k], vectors.col(k));
  }

  std::vector<Index> order(m);
  std::iota(order.begin(), order.end(), Index{0});
  if (contour)
  {
    std::stable_sort(order.begin(), order.end(),
                     [&](Index a, Index b)
                     {
                       const bool ia = contour->Contains(values[a]);
                       const bool ib = contour->Contains(values[b]);
                       if (ia != ib)
                       {
                         return ia;
                       }
                       return residuals[a] < residuals[b];
                     });
  }

  out.values.resize(m);
  out.residuals.resize(m);
  out.vectors.resize(n, m);
  for (Index k = 0; k < m; k++)
  {
    out.values[k] = values[order[k]];
    out.residuals[k] = residuals[order[k]];
    out.vectors.col(k) = vectors.col(order[k]);
  }
  return out;
}

}  // namespace nepcontour
