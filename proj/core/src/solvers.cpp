// Copyright 2026 The nepcontour Authors. All Rights Reserved.
// SPDX-License-Identifier: Apache-2.0

#include "nepcontour/solvers.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <sstream>

#include "nepcontour/error.hpp"
#include "nepcontour/moments.hpp"

namespace nepcontour
{

const char *ToString(Linearization lin) noexcept
{
  return lin == Linearization::Qr ? "qr" : "svd";
}

void Validate(const SolverOptions &opts, Index dimension)
{
  auto fail = [](const std::string &msg) { throw Error(ErrorCode::InvalidParameter, msg); };
  if (opts.subspace_size < 1)
  {
    fail("subspace size m must be at least 1");
  }
  if (opts.subspace_size > dimension)
  {
    fail("subspace size m = " + std::to_string(opts.subspace_size) +
         " exceeds the problem dimension " + std::to_string(dimension));
  }
  if (opts.node_count < 2)
  {
    fail("node count N must be at least 2");
  }
  if (opts.moment_count < 1)
  {
    fail("moment count K must be at least 1");
  }
  if (!(opts.tolerance > 0.0) || !std::isfinite(opts.tolerance))
  {
    fail("tolerance must be positive and finite");
  }
  if (opts.max_iterations < 0)
  {
    fail("max iterations must be non-negative");
  }
  if (!(opts.svd_filter_tol > 0.0 && opts.svd_filter_tol < 1.0))
  {
    fail("SVD filter tolerance must lie in (0, 1)");
  }
  if (opts.workers < 1)
  {
    fail("worker count must be at least 1");
  }
  if (opts.moment_count * opts.subspace_size > kMaxReducedSize)
  {
    fail("K * m = " + std::to_string(opts.moment_count * opts.subspace_size) +
         " exceeds the dense eigensolver limit " + std::to_string(kMaxReducedSize));
  }
}

ConvergenceStatus CheckConvergence(const EigenpairSet &pairs, const Contour &contour,
                                   double tolerance)
{
  ConvergenceStatus status;
  double worst = 0.0;
  for (Index i = 0; i < pairs.Size(); i++)
  {
    if (contour.Contains(pairs.values[i]))
    {
      status.interior_count++;
      worst = std::max(worst, pairs.residuals[i]);
    }
  }
  if (status.interior_count > 0)
  {
    status.max_interior_residual = worst;
    status.converged = worst < tolerance;
  }
  return status;
}

RitzBlock Linearize(const Matrix &m0, const Matrix &m1, Linearization lin, double svd_filter_tol,
                    const Contour &contour)
{
  if (m0.rows() != m1.rows() || m0.cols() != m1.cols())
  {
    throw Error(ErrorCode::InvalidParameter, "moment pair dimensions differ");
  }
  Matrix basis, reduced;
  Index rank = 0;
  if (lin == Linearization::Svd)
  {
    SvdResult svd = SvdFiltered(m0, svd_filter_tol);
    rank = svd.Rank();
    reduced = svd.left.adjoint() * m1 * svd.right * svd.singular.cwiseInverse().asDiagonal();
    basis = std::move(svd.left);
  }
  else
  {
    QrResult qr = QrThin(m0);
    rank = qr.r.rows();
    reduced = TriangularSolveRight(qr.q.adjoint() * m1, qr.r);
    basis = std::move(qr.q);
  }
  EigResult eig = DenseEig(reduced, contour.Center());
  RitzBlock out;
  out.values.assign(eig.values.data(), eig.values.data() + eig.values.size());
  out.vectors = basis * eig.vectors;
  out.rank = rank;
  return out;
}

namespace
{

bool TieLess(Complex a, Complex b)
{
  if (std::abs(a) != std::abs(b))
  {
    return std::abs(a) < std::abs(b);
  }
  return a.imag() < b.imag();
}

}  // namespace

EigenpairSet Deflate(const EigenpairSet &candidates, const Contour &contour, Index keep)
{
  if (candidates.Size() == 0)
  {
    throw Error(ErrorCode::DeflationUnderflow, "no eigenpair candidates survived filtering");
  }
  std::vector<Index> order(candidates.Size());
  std::iota(order.begin(), order.end(), Index{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](Index a, Index b)
                   {
                     const Complex la = candidates.values[a], lb = candidates.values[b];
                     const bool ia = contour.Contains(la), ib = contour.Contains(lb);
                     if (ia != ib)
                     {
                       return ia;
                     }
                     const double ka = ia ? candidates.residuals[a] : contour.ScaledDistance(la);
                     const double kb = ib ? candidates.residuals[b] : contour.ScaledDistance(lb);
                     if (ka != kb)
                     {
                       return ka < kb;
                     }
                     return TieLess(la, lb);
                   });
  order.resize(std::min<Index>(keep, candidates.Size()));

  EigenpairSet out;
  out.warnings = candidates.warnings;
  out.vectors.resize(candidates.vectors.rows(), static_cast<Index>(order.size()));
  for (Index k = 0; k < static_cast<Index>(order.size()); k++)
  {
    out.values.push_back(candidates.values[order[k]]);
    out.residuals.push_back(candidates.residuals[order[k]]);
    out.vectors.col(k) = candidates.vectors.col(order[k]);
  }
  return out;
}

namespace
{

// Eigenpairs for one moment pass.
EigenpairSet ExtractPairs(const NepProblem &problem, const Contour &contour,
                          const SolverOptions &opts, const MomentSet &ms, Linearization lin,
                          Index &rank)
{
  const Index n = problem.Dimension();
  if (ms.order == 1)
  {
    RitzBlock rb = Linearize(ms.moments[0], ms.moments[1], lin, opts.svd_filter_tol, contour);
    rank = rb.rank;
    return Finalize({std::move(rb.values), std::move(rb.vectors), {}, {}}, problem, contour);
  }
  const HankelPencil hp = AssembleHankel(ms);
  RitzBlock rb = Linearize(hp.h0, hp.h1, lin, opts.svd_filter_tol, contour);
  rank = rb.rank;
  // With the identity as left probe, the leading n rows carry the eigenvectors.
  EigenpairSet candidates =
      Finalize({std::move(rb.values), rb.vectors.topRows(n), {}, {}}, problem, contour);
  return Deflate(candidates, contour, opts.subspace_size);
}

SolveResult Run(const NepProblem &problem, const Contour &contour, const SolverOptions &opts,
                Linearization lin, bool single_pass)
{
  const Index n = problem.Dimension();
  Validate(opts, n);

  NodeSolver solver(problem, TrapezoidRule(contour, opts.node_count),
                    {.cache_factorizations = opts.cache_factorizations,
                     .workers = opts.workers});
  std::mt19937_64 rng(opts.rng_seed);
  const Matrix probe = RandomComplexGaussian(n, opts.subspace_size, rng);

  SolveResult best;
  double best_residual = std::numeric_limits<double>::infinity();
  ConvergenceRecord record;
  EigenpairSet current;
  for (int pass = 0;; pass++)
  {
    const MomentSet ms =
        pass == 0 ? DirectMoments(solver, probe, opts.moment_count)
                  : RiiMoments(solver, current.values, current.vectors, opts.moment_count);
    Index rank = 0;
    current = ExtractPairs(problem, contour, opts, ms, lin, rank);

    const ConvergenceStatus status = CheckConvergence(current, contour, opts.tolerance);
    record.max_residual.push_back(status.max_interior_residual);
    record.interior_count.push_back(status.interior_count);
    record.rank.push_back(rank);

    if (pass == 0 || status.converged || status.max_interior_residual < best_residual)
    {
      best.pairs = current;
      best_residual = status.max_interior_residual;
      record.best_pass = pass;
    }
    if (status.converged)
    {
      record.converged = true;
      break;
    }
    if (single_pass || pass >= opts.max_iterations)
    {
      break;
    }
  }
  record.factorizations = solver.Factorizations();
  record.block_solves = solver.BlockSolves();
  best.record = std::move(record);
  return best;
}

}  // namespace

SolveResult BeynSolve(const NepProblem &problem, const Contour &contour,
                      const SolverOptions &opts)
{
  if (opts.moment_count != 1)
  {
    throw Error(ErrorCode::InvalidParameter, "Beyn's method here uses K = 1");
  }
  return Run(problem, contour, opts, Linearization::Svd, true);
}

SolveResult HybridSolve(const NepProblem &problem, const Contour &contour,
                        const SolverOptions &opts)
{
  if (opts.moment_count != 1)
  {
    throw Error(ErrorCode::InvalidParameter,
                "the hybrid solver takes K = 1; use HigherMomentSolve for K >= 2");
  }
  return Run(problem, contour, opts, opts.linearization, false);
}

SolveResult HigherMomentSolve(const NepProblem &problem, const Contour &contour,
                              const SolverOptions &opts)
{
  if (opts.moment_count < 2)
  {
    throw Error(ErrorCode::InvalidParameter, "the higher-moment solver needs K >= 2");
  }
  return Run(problem, contour, opts, opts.linearization, false);
}

SolveResult Solve(const NepProblem &problem, const Contour &contour, const SolverOptions &opts)
{
  return opts.moment_count == 1 ? HybridSolve(problem, contour, opts)
                                : HigherMomentSolve(problem, contour, opts);
}

}  // namespace nepcontour
