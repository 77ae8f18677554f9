// Copyright 2026 The nepcontour Authors. All Rights Reserved.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "nepcontour/contour.hpp"
#include "nepcontour/types.hpp"

namespace nepcontour
{

// Factorization of T(z) at a fixed shift. A handle is used by one thread at a time.
class Factorization
{
public:
  virtual ~Factorization() = default;

  // Returns T(z)^{-1} * rhs for a block of right-hand sides.
  virtual Matrix Solve(const Matrix &rhs) const = 0;
};

//
// Nonlinear eigenvalue problem T(lambda) x = 0 with T holomorphic on its domain.
//
// Implementations must be safe to share across threads: Factorize() may be called
// concurrently at distinct shifts.
//
class NepProblem
{
public:
  virtual ~NepProblem() = default;

  virtual Index Dimension() const = 0;

  // Dense n x n matrix T(z).
  virtual Matrix Evaluate(Complex z) const = 0;

  // T(z) * x. The default forms T(z) densely.
  virtual Matrix Apply(Complex z, const Matrix &x) const;

  // ||T(z)||_F.
  virtual double FrobeniusNormAt(Complex z) const;

  // Throws ErrorCode::NodeSingular when T(z) is numerically singular. The default is a
  // dense LU of Evaluate(z).
  virtual std::unique_ptr<Factorization> Factorize(Complex z) const;
};

// Dense partial-pivoting LU; rejects numerically singular matrices.
std::unique_ptr<Factorization> FactorizeDense(const Matrix &t, Complex z);

// Eigenvalue/eigenvector pairs; column i of vectors belongs to values[i].
struct EigenpairSet
{
  std::vector<Complex> values;
  Matrix vectors;
  std::vector<double> residuals;
  std::vector<std::string> warnings;

  Index Size() const { return static_cast<Index>(values.size()); }
};

// Column i is T(lambda_i) x_i.
struct BlockResidual
{
  Matrix matrix;
};

// ||T(lambda) x||_2 / ||T(lambda)||_F with x normalized internally. For n = 1 the ratio
// carries no information and |T(lambda) x| / |x| is returned instead.
double Residual(const NepProblem &problem, Complex lambda, const Vector &x);

BlockResidual ComputeBlockResidual(const NepProblem &problem, const EigenpairSet &pairs);
Matrix ComputeBlockResidual(const NepProblem &problem, std::span<const Complex> values,
                            const Matrix &vectors);

// Normalizes columns, recomputes residuals and, when a contour is given, orders pairs
// inside-first then by ascending residual. Zero columns are dropped with a warning.
EigenpairSet Finalize(EigenpairSet pairs, const NepProblem &problem,
                      const std::optional<Contour> &contour = std::nullopt);

}  // namespace nepcontour
