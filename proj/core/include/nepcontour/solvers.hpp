// Copyright 2026 The nepcontour Authors. All Rights Reserved.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "nepcontour/contour.hpp"
#include "nepcontour/linalg.hpp"
#include "nepcontour/nep.hpp"
#include "nepcontour/types.hpp"

namespace nepcontour
{

enum class Linearization
{
  Qr,
  Svd
};

const char *ToString(Linearization lin) noexcept;

// Upper bound on K * m, the size of the reduced dense eigenproblem.
inline constexpr Index kMaxReducedSize = 4096;

struct SolverOptions
{
  Index subspace_size = 8;   // m
  int node_count = 16;       // N
  int moment_count = 1;      // K
  int max_iterations = 20;   // passes after the first
  double tolerance = 1.0e-12;
  std::uint64_t rng_seed = 0;
  Linearization linearization = Linearization::Svd;
  double svd_filter_tol = kDefaultSvdFilterTol;
  bool cache_factorizations = true;
  int workers = 1;
};

// Throws InvalidParameter describing the first violated constraint.
void Validate(const SolverOptions &opts, Index dimension);

//
// One entry per moment pass. Entry 0 is the initial (Beyn) pass built from direct moments;
// entries 1.. are residual inverse iteration passes.
//
struct ConvergenceRecord
{
  std::vector<double> max_residual;      // over interior pairs; +inf when there are none
  std::vector<Index> interior_count;
  std::vector<Index> rank;               // retained rank of the linearization per pass
  std::int64_t factorizations = 0;
  std::int64_t block_solves = 0;
  bool converged = false;
  int best_pass = 0;                     // pass whose iterate was returned

  int Passes() const { return static_cast<int>(max_residual.size()); }
};

struct SolveResult
{
  EigenpairSet pairs;
  ConvergenceRecord record;
};

struct ConvergenceStatus
{
  bool converged = false;
  double max_interior_residual = std::numeric_limits<double>::infinity();
  Index interior_count = 0;
};

// Converged iff at least one pair is interior and every interior residual is below
// tolerance. Exterior pairs never block convergence.
ConvergenceStatus CheckConvergence(const EigenpairSet &pairs, const Contour &contour,
                                   double tolerance);

// Eigenpair estimates from a moment pair (M0, M1): diagonalizes V0^H M1 W0 Sigma0^{-1}
// (SVD) or q^H M1 r^{-1} (QR) and lifts the eigenvectors back. Vectors have M0.rows() rows
// and are not normalized.
struct RitzBlock
{
  std::vector<Complex> values;
  Matrix vectors;
  Index rank = 0;
};
RitzBlock Linearize(const Matrix &m0, const Matrix &m1, Linearization lin, double svd_filter_tol,
                    const Contour &contour);

// Reduces candidates to at most `keep` pairs: interior ones by ascending residual, then
// exterior ones by ascending scaled distance from the center. Ties fall back to ascending
// |lambda|, then ascending imaginary part. Throws DeflationUnderflow on an empty input.
EigenpairSet Deflate(const EigenpairSet &candidates, const Contour &contour, Index keep);

// Single-pass contour method from a seeded random probing block.
SolveResult BeynSolve(const NepProblem &problem, const Contour &contour,
                      const SolverOptions &opts);

// Beyn first pass followed by residual inverse iteration with the K = 1 moments.
SolveResult HybridSolve(const NepProblem &problem, const Contour &contour,
                        const SolverOptions &opts);

// Hybrid iteration on block Hankel moments (K >= 2) with per-pass deflation back to m
// columns.
SolveResult HigherMomentSolve(const NepProblem &problem, const Contour &contour,
                              const SolverOptions &opts);

// Dispatches on opts.moment_count.
SolveResult Solve(const NepProblem &problem, const Contour &contour, const SolverOptions &opts);

}  // namespace nepcontour
