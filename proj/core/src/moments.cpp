// Copyright 2026 The nepcontour Authors. All Rights Reserved.
// SPDX-License-Identifier: Apache-2.0

#include "nepcontour/moments.hpp"

#include <algorithm>
#include <exception>
#include <sstream>
#include <thread>

#include "nepcontour/error.hpp"

namespace nepcontour
{

NodeSolver::NodeSolver(const NepProblem &problem, QuadratureRule rule, NodeSolverOptions options)
  : problem_(problem), rule_(std::move(rule)), options_(options)
{
  if (rule_.Size() == 0)
  {
    throw Error(ErrorCode::InvalidParameter, "node solver needs a nonempty quadrature rule");
  }
  cache_.resize(rule_.Size());
}

NodeSolver::~NodeSolver() = default;

const Factorization &NodeSolver::FactorizationAt(Index j, std::unique_ptr<Factorization> &scratch)
{
  if (options_.cache_factorizations && cache_[j])
  {
    return *cache_[j];
  }
  auto f = problem_.Factorize(rule_.nodes[j]);
  factorizations_++;
  if (options_.cache_factorizations)
  {
    cache_[j] = std::move(f);
    return *cache_[j];
  }
  scratch = std::move(f);
  return *scratch;
}

std::vector<Matrix> NodeSolver::SolveAll(const Matrix &rhs)
{
  if (rhs.rows() != problem_.Dimension())
  {
    throw Error(ErrorCode::InvalidParameter, "node solve: right-hand side has wrong row count");
  }
  const Index num_nodes = rule_.Size();
  std::vector<Matrix> out(num_nodes);
  std::vector<std::exception_ptr> errors(num_nodes);

  auto work = [&](Index j)
  {
    try
    {
      std::unique_ptr<Factorization> scratch;
      out[j] = FactorizationAt(j, scratch).Solve(rhs);
      block_solves_++;
    }
    catch (...)
    {
      errors[j] = std::current_exception();
    }
  };

  const Index workers = std::clamp<Index>(options_.workers, 1, num_nodes);
  if (workers == 1)
  {
    for (Index j = 0; j < num_nodes; j++)
    {
      work(j);
    }
  }
  else
  {
    // Each worker owns a strided set of nodes, so each cache slot has a single writer.
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (Index w = 0; w < workers; w++)
    {
      pool.emplace_back(
          [&, w]
          {
            for (Index j = w; j < num_nodes; j += workers)
            {
              work(j);
            }
          });
    }
  }

  for (const auto &e : errors)
  {
    if (e)
    {
      std::rethrow_exception(e);
    }
  }
  return out;
}

namespace
{

void CheckMomentCount(int num_moments)
{
  if (num_moments < 1)
  {
    throw Error(ErrorCode::InvalidParameter, "moment count K must be at least 1");
  }
}

MomentSet EmptyMoments(int num_moments, Index rows, Index cols, MomentKind kind)
{
  MomentSet ms;
  ms.order = num_moments;
  ms.kind = kind;
  ms.moments.assign(2 * num_moments, Matrix::Zero(rows, cols));
  return ms;
}

}  // namespace

MomentSet DirectMoments(NodeSolver &solver, const Matrix &x, int num_moments)
{
  CheckMomentCount(num_moments);
  if (x.cols() == 0)
  {
    throw Error(ErrorCode::InvalidParameter, "probing matrix has no columns");
  }
  const auto &rule = solver.Rule();
  const std::vector<Matrix> solves = solver.SolveAll(x);

  MomentSet ms = EmptyMoments(num_moments, x.rows(), x.cols(), MomentKind::Direct);
  for (Index j = 0; j < rule.Size(); j++)
  {
    Complex scale = rule.weights[j];
    for (auto &moment : ms.moments)
    {
      moment += scale * solves[j];
      scale *= rule.nodes[j];
    }
  }
  return ms;
}

MomentSet DirectMoments(const NepProblem &problem, const Matrix &x, const QuadratureRule &rule,
                        int num_moments)
{
  NodeSolver solver(problem, rule, {.cache_factorizations = false, .workers = 1});
  return DirectMoments(solver, x, num_moments);
}

MomentSet RiiMoments(NodeSolver &solver, std::span<const Complex> values, const Matrix &x,
                     int num_moments)
{
  CheckMomentCount(num_moments);
  if (values.empty() || x.cols() != static_cast<Index>(values.size()))
  {
    throw Error(ErrorCode::InvalidParameter,
                "RII moments need one Ritz value per subspace column");
  }
  const auto &rule = solver.Rule();
  const double guard = kNearPoleGuard * rule.contour.Radius();
  for (Index j = 0; j < rule.Size(); j++)
  {
    for (Index i = 0; i < x.cols(); i++)
    {
      if (!(std::abs(rule.nodes[j] - values[i]) >= guard))
      {
        std::ostringstream os;
        os.precision(17);
        os << "Ritz value " << i << " (" << values[i] << ") is within " << guard
           << " of quadrature node " << j << " (" << rule.nodes[j] << ")";
        throw Error(ErrorCode::NearPole, os.str());
      }
    }
  }

  const Matrix residual = ComputeBlockResidual(solver.Problem(), values, x);
  const std::vector<Matrix> solves = solver.SolveAll(residual);

  MomentSet ms = EmptyMoments(num_moments, x.rows(), x.cols(), MomentKind::Rii);
  Vector resolvent(x.cols());
  for (Index j = 0; j < rule.Size(); j++)
  {
    for (Index i = 0; i < x.cols(); i++)
    {
      resolvent(i) = 1.0 / (rule.nodes[j] - values[i]);
    }
    const Matrix update = (x - solves[j]) * resolvent.asDiagonal();
    Complex scale = rule.weights[j];
    for (auto &moment : ms.moments)
    {
      moment += scale * update;
      scale *= rule.nodes[j];
    }
  }
  return ms;
}

MomentSet RiiMoments(const NepProblem &problem, const EigenpairSet &pairs,
                     const QuadratureRule &rule, int num_moments)
{
  NodeSolver solver(problem, rule, {.cache_factorizations = false, .workers = 1});
  return RiiMoments(solver, pairs.values, pairs.vectors, num_moments);
}

HankelPencil AssembleHankel(const MomentSet &ms)
{
  const int k = ms.order;
  if (k < 1 || static_cast<int>(ms.moments.size()) != 2 * k)
  {
    throw Error(ErrorCode::InvalidParameter, "Hankel assembly needs 2K moments");
  }
  const Index rows = ms.moments[0].rows(), cols = ms.moments[0].cols();
  HankelPencil hp{Matrix(k * rows, k * cols), Matrix(k * rows, k * cols)};
  for (int i = 0; i < k; i++)
  {
    for (int j = 0; j < k; j++)
    {
      hp.h0.block(i * rows, j * cols, rows, cols) = ms.moments[i + j];
      hp.h1.block(i * rows, j * cols, rows, cols) = ms.moments[i + j + 1];
    }
  }
  return hp;
}

}  // namespace nepcontour
