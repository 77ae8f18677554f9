// Copyright 2026 The nepcontour Authors. All Rights Reserved.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <atomic>
#include <cstdint>
#include <memory>
#include <span>
#include <vector>

#include "nepcontour/contour.hpp"
#include "nepcontour/nep.hpp"
#include "nepcontour/types.hpp"

namespace nepcontour
{

enum class MomentKind
{
  Direct,  // sum_j w_j z_j^k T(z_j)^{-1} X
  Rii      // residual inverse iteration form
};

// Moments 0 .. 2K-1, all n x m.
struct MomentSet
{
  int order = 0;
  std::vector<Matrix> moments;
  MomentKind kind = MomentKind::Direct;
};

// Block Hankel pair with the left probing matrix fixed to the identity:
// h0 block (i, j) = moments[i + j], h1 block (i, j) = moments[i + j + 1].
struct HankelPencil
{
  Matrix h0;
  Matrix h1;
};

// Ritz values closer than this multiple of the radius to a node are rejected.
inline constexpr double kNearPoleGuard = 1.0e-12;

struct NodeSolverOptions
{
  bool cache_factorizations = true;
  int workers = 1;
};

//
// Owns the per-node linear solves T(z_j)^{-1} B for one problem and quadrature rule.
// Factorizations are optionally kept across calls; the counters are the instrumentation
// used for cost accounting.
//
class NodeSolver
{
public:
  NodeSolver(const NepProblem &problem, QuadratureRule rule, NodeSolverOptions options = {});
  // Keeps a reference to the problem; binding a temporary would dangle.
  NodeSolver(NepProblem &&, QuadratureRule, NodeSolverOptions = {}) = delete;
  ~NodeSolver();

  NodeSolver(const NodeSolver &) = delete;
  NodeSolver &operator=(const NodeSolver &) = delete;

  const NepProblem &Problem() const { return problem_; }
  const QuadratureRule &Rule() const { return rule_; }

  // T(z_j)^{-1} rhs for every node, returned in node order. Throws NodeSingular naming the
  // node on failure.
  std::vector<Matrix> SolveAll(const Matrix &rhs);

  std::int64_t Factorizations() const { return factorizations_.load(); }
  std::int64_t BlockSolves() const { return block_solves_.load(); }

private:
  const Factorization &FactorizationAt(Index j, std::unique_ptr<Factorization> &scratch);

  const NepProblem &problem_;
  QuadratureRule rule_;
  NodeSolverOptions options_;
  std::vector<std::unique_ptr<Factorization>> cache_;
  std::atomic<std::int64_t> factorizations_{0};
  std::atomic<std::int64_t> block_solves_{0};
};

// Moments k = 0 .. 2K-1 of the resolvent applied to X. Each node is factorized once and
// reused for every power and right-hand side.
MomentSet DirectMoments(NodeSolver &solver, const Matrix &x, int num_moments);
MomentSet DirectMoments(const NepProblem &problem, const Matrix &x, const QuadratureRule &rule,
                        int num_moments);

// sum_j w_j z_j^k [X - T(z_j)^{-1} T(X, Lambda)] (z_j I - Lambda)^{-1}, k = 0 .. 2K-1.
MomentSet RiiMoments(NodeSolver &solver, std::span<const Complex> values, const Matrix &x,
                     int num_moments);
MomentSet RiiMoments(const NepProblem &problem, const EigenpairSet &pairs,
                     const QuadratureRule &rule, int num_moments);

HankelPencil AssembleHankel(const MomentSet &ms);

}  // namespace nepcontour
