// Copyright 2026 The nepcontour Authors. All Rights Reserved.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <utility>
#include <vector>

#include "nepcontour/types.hpp"

namespace nepcontour
{

inline constexpr double kDefaultSvdFilterTol = 1.0e-12;

// Truncated SVD, A ~ left * diag(singular) * right^H.
struct SvdResult
{
  Matrix left;           // rows x r, orthonormal columns
  RealVector singular;   // r values, descending
  Matrix right;          // cols x r, orthonormal columns

  Index Rank() const { return singular.size(); }
};

// Thin QR with diag(r) real and non-negative.
struct QrResult
{
  Matrix q;
  Matrix r;
};

struct EigResult
{
  Vector values;
  Matrix vectors;  // unit 2-norm columns

  // Index pairs (i, j), i < j, of eigenvectors that are nearly parallel, which is how a
  // defective eigenvalue shows up in a diagonalizing solver.
  std::vector<std::pair<Index, Index>> near_parallel;
};

// Keeps the singular triplets with sigma_i > tol_rel * sigma_max. Throws EmptySubspace if
// none survive.
SvdResult SvdFiltered(const Matrix &a, double tol_rel = kDefaultSvdFilterTol);

// Throws RankDeficient if some |r_ii| < 1e-14 ||A||_F.
QrResult QrThin(const Matrix &a);

// All eigenpairs of a square matrix. With a center, ordered by ascending |lambda - center|;
// otherwise by real part then imaginary part.
EigResult DenseEig(const Matrix &b, std::optional<Complex> center = std::nullopt);

// M * r^{-1} by substitution against the upper triangle of r.
Matrix TriangularSolveRight(const Matrix &m, const Matrix &r);

// Entries are independent standard complex Gaussians (E|x|^2 = 1).
Matrix RandomComplexGaussian(Index rows, Index cols, std::mt19937_64 &rng);

}  // namespace nepcontour
