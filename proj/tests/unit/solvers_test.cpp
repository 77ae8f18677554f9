// Copyright 2026 The nepcontour Authors. All Rights Reserved.
// SPDX-License-Identifier: Apache-2.0

#include "nepcontour/solvers.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <Eigen/Eigenvalues>
#include <gtest/gtest.h>

#include "nepcontour/error.hpp"
#include "nepcontour/moments.hpp"
#include "nepcontour/problems.hpp"
#include "oracles.hpp"

namespace nepcontour
{
namespace
{

using testing::RandomHermitian;

std::vector<Complex> Interior(const EigenpairSet &pairs, const Contour &c)
{
  std::vector<Complex> out;
  for (Complex v : pairs.values)
  {
    if (c.Contains(v))
    {
      out.push_back(v);
    }
  }
  std::sort(out.begin(), out.end(), [](Complex a, Complex b)
            { return a.real() != b.real() ? a.real() < b.real() : a.imag() < b.imag(); });
  return out;
}

// Largest distance from a value in `a` to its nearest neighbour in `b`, both ways.
double SetDistance(const std::vector<Complex> &a, const std::vector<Complex> &b)
{
  double worst = 0.0;
  for (const auto *pair : {&a, &b})
  {
    const auto &from = *pair;
    const auto &to = pair == &a ? b : a;
    for (Complex v : from)
    {
      double best = INFINITY;
      for (Complex w : to)
      {
        best = std::min(best, std::abs(v - w));
      }
      worst = std::max(worst, best);
    }
  }
  return worst;
}

SolverOptions ButterflyOptions()
{
  SolverOptions o;
  o.subspace_size = 30;
  o.node_count = 16;
  return o;
}

const Contour kButterflyContour({1.0, 1.0}, 0.5);

TEST(ValidateTest, RejectsOutOfRangeOptions)
{
  auto expect_invalid = [](SolverOptions o, Index n)
  {
    try
    {
      Validate(o, n);
      ADD_FAILURE() << "accepted invalid options";
    }
    catch (const Error &e)
    {
      EXPECT_EQ(e.code(), ErrorCode::InvalidParameter);
    }
  };
  SolverOptions o;
  EXPECT_NO_THROW(Validate(o, 10));
  o.subspace_size = 0;
  expect_invalid(o, 10);
  o.subspace_size = 11;
  expect_invalid(o, 10);
  o = {};
  o.node_count = 1;
  expect_invalid(o, 10);
  o = {};
  o.moment_count = 0;
  expect_invalid(o, 10);
  o = {};
  o.tolerance = 0.0;
  expect_invalid(o, 10);
  o.tolerance = NAN;
  expect_invalid(o, 10);
  o = {};
  o.max_iterations = -1;
  expect_invalid(o, 10);
  o = {};
  o.svd_filter_tol = 1.0;
  expect_invalid(o, 10);
  o = {};
  o.workers = 0;
  expect_invalid(o, 10);
  o = {};
  o.subspace_size = 2000;
  o.moment_count = 3;
  expect_invalid(o, 5000);
}

TEST(CheckConvergenceTest, NoInteriorPairs)
{
  const EigenpairSet pairs{{5.0}, Matrix::Ones(1, 1), {0.0}, {}};
  const ConvergenceStatus s = CheckConvergence(pairs, Contour(0.0, 1.0), 1e-12);
  EXPECT_FALSE(s.converged);
  EXPECT_TRUE(std::isinf(s.max_interior_residual));
  EXPECT_EQ(s.interior_count, 0);
}

TEST(CheckConvergenceTest, ExteriorResidualsDoNotBlock)
{
  const EigenpairSet pairs{{0.1, 0.2, 9.0}, Matrix::Ones(1, 3), {0.0, 0.0, 1.0}, {}};
  const ConvergenceStatus s = CheckConvergence(pairs, Contour(0.0, 1.0), 1e-12);
  EXPECT_TRUE(s.converged);
  EXPECT_EQ(s.max_interior_residual, 0.0);
  EXPECT_EQ(s.interior_count, 2);
}

TEST(DeflateTest, InteriorByResidualThenExteriorByDistance)
{
  const Contour c(0.0, 1.0);
  const EigenpairSet cand{{0.5, 3.0, 0.1, 1.5, 0.9, Complex(0.0, -1.5), Complex(0.0, 1.5)},
                          Matrix::Identity(7, 7),
                          {1e-3, 0.0, 1e-9, 0.0, 1e-6, 0.0, 0.0},
                          {}};
  const EigenpairSet out = Deflate(cand, c, 6);
  // The three exterior values at distance 1.5 tie on |lambda| and fall back to Im.
  const std::vector<Complex> expected = {0.1, 0.9, 0.5, Complex(0.0, -1.5), 1.5,
                                         Complex(0.0, 1.5)};
  EXPECT_EQ(out.values, expected);
  EXPECT_EQ(out.vectors.cols(), 6);
  EXPECT_EQ(out.vectors.col(0), cand.vectors.col(2));
  EXPECT_THROW(Deflate(EigenpairSet{}, c, 3), Error);
}

TEST(BeynSolveTest, CosineRoot)
{
  SolverOptions o;
  o.subspace_size = 1;
  o.node_count = 32;
  const SolveResult r = BeynSolve(MakeCosine(), Contour(std::numbers::pi / 2.0, 1.0), o);
  ASSERT_EQ(r.pairs.Size(), 1);
  EXPECT_LT(std::abs(r.pairs.values[0] - std::numbers::pi / 2.0), 1e-10);
  EXPECT_EQ(r.record.Passes(), 1);
}

TEST(BeynSolveTest, LinearDiagonalSpectrum)
{
  Matrix a = Matrix::Zero(3, 3);
  a.diagonal() << 0.1, 0.9, 3.0;
  SolverOptions o;
  o.subspace_size = 3;
  o.node_count = 64;
  const Contour unit(0.0, 1.0);
  const SolveResult r = BeynSolve(MakeLinear(a), unit, o);
  const std::vector<Complex> inside = Interior(r.pairs, unit);
  ASSERT_EQ(inside.size(), 2u);
  EXPECT_LT(std::abs(inside[0] - 0.1), 1e-8);
  EXPECT_LT(std::abs(inside[1] - 0.9), 1e-8);
}

TEST(BeynSolveTest, ButterflyNeedsManyNodes)
{
  SolverOptions o = ButterflyOptions();
  o.node_count = 128;
  const SolveResult r = BeynSolve(MakeButterfly(), kButterflyContour, o);
  EXPECT_EQ(r.record.interior_count[0], 13);
  EXPECT_LT(r.record.max_residual[0], 1e-8);
}

TEST(BeynSolveTest, RejectsHigherMoments)
{
  SolverOptions o = ButterflyOptions();
  o.moment_count = 2;
  EXPECT_THROW(BeynSolve(MakeButterfly(), kButterflyContour, o), Error);
  EXPECT_THROW(HybridSolve(MakeButterfly(), kButterflyContour, o), Error);
  o.moment_count = 1;
  EXPECT_THROW(HigherMomentSolve(MakeButterfly(), kButterflyContour, o), Error);
}

TEST(HybridSolveTest, FirstPassIsBeyn)
{
  const PolynomialNep problem = MakeButterfly();
  SolverOptions o = ButterflyOptions();
  const SolveResult beyn = BeynSolve(problem, kButterflyContour, o);
  o.max_iterations = 0;
  const SolveResult hybrid = HybridSolve(problem, kButterflyContour, o);
  EXPECT_EQ(hybrid.pairs.values, beyn.pairs.values);
  EXPECT_EQ(hybrid.pairs.vectors, beyn.pairs.vectors);
  EXPECT_EQ(hybrid.record.max_residual, beyn.record.max_residual);
  o.max_iterations = 20;
  EXPECT_EQ(HybridSolve(problem, kButterflyContour, o).record.max_residual[0],
            beyn.record.max_residual[0]);
}

TEST(HybridSolveTest, ButterflyConvergesWithBothLinearizations)
{
  const PolynomialNep problem = MakeButterfly();
  for (Linearization lin : {Linearization::Svd, Linearization::Qr})
  {
    SolverOptions o = ButterflyOptions();
    o.linearization = lin;
    const SolveResult r = HybridSolve(problem, kButterflyContour, o);
    EXPECT_TRUE(r.record.converged) << ToString(lin);
    EXPECT_EQ(Interior(r.pairs, kButterflyContour).size(), 13u);
    EXPECT_EQ(CheckConvergence(r.pairs, kButterflyContour, 1e-12).interior_count, 13);
    EXPECT_LE(r.record.Passes(), 8);
  }
}

TEST(HybridSolveTest, LinearHermitianMatchesDenseOracle)
{
  const Index n = 40;
  const Matrix a = RandomHermitian(n, 5);
  Eigen::SelfAdjointEigenSolver<Matrix> es(a);
  const Contour contour(0.2, 0.9);
  std::vector<Complex> expected;
  for (Index i = 0; i < n; i++)
  {
    if (contour.Contains(es.eigenvalues()[i]))
    {
      expected.emplace_back(es.eigenvalues()[i]);
    }
  }
  ASSERT_GE(expected.size(), 3u);
  ASSERT_EQ(static_cast<int>(expected.size()), testing::InertiaCount(MakeLinear(a), -0.7, 1.1));

  SolverOptions o;
  o.subspace_size = static_cast<Index>(expected.size()) + 6;
  o.node_count = 16;
  const SolveResult r = HybridSolve(MakeLinear(a), contour, o);
  ASSERT_TRUE(r.record.converged);
  const std::vector<Complex> got = Interior(r.pairs, contour);
  ASSERT_EQ(got.size(), expected.size());
  EXPECT_LT(SetDistance(got, expected), 1e-12);
}

TEST(HybridSolveTest, ReturnsBestIterateWhenUnconverged)
{
  SolverOptions o = ButterflyOptions();
  o.max_iterations = 2;
  const SolveResult r = HybridSolve(MakeButterfly(), kButterflyContour, o);
  EXPECT_FALSE(r.record.converged);
  ASSERT_EQ(r.record.Passes(), 3);
  const double best = *std::min_element(r.record.max_residual.begin(), r.record.max_residual.end());
  EXPECT_EQ(r.record.max_residual[r.record.best_pass], best);
  EXPECT_EQ(CheckConvergence(r.pairs, kButterflyContour, 1e-12).max_interior_residual, best);
}

TEST(HybridSolveTest, RecordLengthIsBounded)
{
  for (int iters : {0, 1, 3, 7})
  {
    SolverOptions o = ButterflyOptions();
    o.max_iterations = iters;
    const SolveResult r = HybridSolve(MakeButterfly(), kButterflyContour, o);
    EXPECT_LE(r.record.Passes(), iters + 1);
    EXPECT_EQ(r.record.rank.size(), r.record.max_residual.size());
    EXPECT_EQ(r.record.interior_count.size(), r.record.max_residual.size());
  }
}

TEST(HybridSolveTest, CostAccounting)
{
  SolverOptions o = ButterflyOptions();
  const SolveResult cached = HybridSolve(MakeButterfly(), kButterflyContour, o);
  EXPECT_EQ(cached.record.factorizations, 16);
  EXPECT_EQ(cached.record.block_solves, 16 * cached.record.Passes());
  o.cache_factorizations = false;
  const SolveResult uncached = HybridSolve(MakeButterfly(), kButterflyContour, o);
  EXPECT_EQ(uncached.record.factorizations, 16 * uncached.record.Passes());
  EXPECT_EQ(uncached.record.max_residual, cached.record.max_residual);
}

TEST(HybridSolveTest, InteriorSpectrumDoesNotDependOnSeed)
{
  const PolynomialNep butterfly = MakeButterfly();
  const GeneralNep hadeler = MakeHadeler();
  const Contour hc(-30.0, 10.0);
  for (std::uint64_t seed : {1u, 7u})
  {
    SolverOptions o = ButterflyOptions();
    const auto a = Interior(HybridSolve(butterfly, kButterflyContour, o).pairs, kButterflyContour);
    o.rng_seed = seed;
    const SolveResult rb = HybridSolve(butterfly, kButterflyContour, o);
    ASSERT_TRUE(rb.record.converged);
    EXPECT_LT(SetDistance(a, Interior(rb.pairs, kButterflyContour)), 1e-8);

    SolverOptions h;
    h.subspace_size = 15;
    h.node_count = 16;
    const auto c = Interior(HybridSolve(hadeler, hc, h).pairs, hc);
    h.rng_seed = seed;
    const SolveResult rh = HybridSolve(hadeler, hc, h);
    ASSERT_TRUE(rh.record.converged);
    EXPECT_LT(SetDistance(c, Interior(rh.pairs, hc)), 1e-8);
  }
}

TEST(HybridSolveTest, ResidualDecreasesEveryPassOnHadeler)
{
  SolverOptions o;
  o.subspace_size = 15;
  o.node_count = 16;
  const SolveResult r = HybridSolve(MakeHadeler(), Contour(-30.0, 10.0), o);
  ASSERT_TRUE(r.record.converged);
  for (int p = 1; p < r.record.Passes(); p++)
  {
    EXPECT_LT(r.record.max_residual[p], r.record.max_residual[p - 1]) << "pass " << p;
  }
}

TEST(HigherMomentSolveTest, DeficientQuadraticRecoversSharedEigenvector)
{
  const PolynomialNep problem = MakeDeficientQuadratic();
  const Contour contour(0.0, 0.25);
  SolverOptions o;
  o.subspace_size = 4;
  o.node_count = 16;
  o.moment_count = 2;
  const SolveResult r = HigherMomentSolve(problem, contour, o);
  ASSERT_TRUE(r.record.converged);
  EXPECT_EQ(r.record.interior_count.back(), 4);
  for (int p = 1; p < r.record.Passes(); p++)
  {
    EXPECT_LT(r.record.max_residual[p], r.record.max_residual[p - 1]);
  }
  Index ia = -1, ib = -1;
  for (Index i = 0; i < r.pairs.Size(); i++)
  {
    if (std::abs(r.pairs.values[i] - kDeficientA) < 1e-10)
    {
      ia = i;
    }
    if (std::abs(r.pairs.values[i] - kDeficientB) < 1e-10)
    {
      ib = i;
    }
  }
  ASSERT_GE(ia, 0);
  ASSERT_GE(ib, 0);
  EXPECT_GT(std::abs(r.pairs.vectors.col(ia).dot(r.pairs.vectors.col(ib))), 1.0 - 1e-8);
}

TEST(HigherMomentSolveTest, OneMomentCannotResolveBoth)
{
  SolverOptions o;
  o.subspace_size = 4;
  o.node_count = 16;
  const SolveResult r = HybridSolve(MakeDeficientQuadratic(), Contour(0.0, 0.25), o);
  int found = 0;
  for (double target : {kDeficientA, kDeficientB})
  {
    for (Index i = 0; i < r.pairs.Size(); i++)
    {
      if (std::abs(r.pairs.values[i] - target) < 1e-10 && r.pairs.residuals[i] < 1e-10)
      {
        found++;
        break;
      }
    }
  }
  EXPECT_LE(found, 1);
}

TEST(HigherMomentSolveTest, MatchesHybridOnHadeler)
{
  const GeneralNep problem = MakeHadeler();
  const Contour contour(-30.0, 10.0);
  SolverOptions o;
  o.subspace_size = 15;
  o.node_count = 16;
  const SolveResult one = HybridSolve(problem, contour, o);
  o.moment_count = 2;
  const SolveResult two = HigherMomentSolve(problem, contour, o);
  ASSERT_TRUE(one.record.converged);
  ASSERT_TRUE(two.record.converged);
  const auto a = Interior(one.pairs, contour);
  const auto b = Interior(two.pairs, contour);
  ASSERT_EQ(a.size(), 12u);
  ASSERT_EQ(b.size(), 12u);
  EXPECT_LT(SetDistance(a, b), 1e-8);
}

TEST(SolveTest, DispatchesOnMomentCount)
{
  SolverOptions o;
  o.subspace_size = 4;
  o.node_count = 16;
  o.moment_count = 2;
  const PolynomialNep problem = MakeDeficientQuadratic();
  const Contour contour(0.0, 0.25);
  EXPECT_EQ(Solve(problem, contour, o).pairs.values,
            HigherMomentSolve(problem, contour, o).pairs.values);
}

}  // namespace
}  // namespace nepcontour
