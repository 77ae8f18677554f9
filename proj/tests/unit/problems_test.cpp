// Copyright 2026 The nepcontour Authors. All Rights Reserved.
// SPDX-License-Identifier: Apache-2.0

#include "nepcontour/problems.hpp"

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>

#include <unistd.h>

#include <Eigen/Eigenvalues>
#include <gtest/gtest.h>

#include "nepcontour/error.hpp"
#include "nepcontour/matrix_market.hpp"
#include "oracles.hpp"

namespace nepcontour
{
namespace
{

namespace fs = std::filesystem;
using testing::CompanionEigenvalues;
using testing::CountInside;
using testing::RandomMatrix;

std::vector<Complex> SortedByReal(std::vector<Complex> v)
{
  std::sort(v.begin(), v.end(), [](Complex a, Complex b)
            { return a.real() != b.real() ? a.real() < b.real() : a.imag() < b.imag(); });
  return v;
}

TEST(CompanionOracleTest, AgreesWithDenseEigOnLinearProblems)
{
  const Matrix a = RandomMatrix(9, 9, 4);
  const auto companion = SortedByReal(CompanionEigenvalues(MakeLinear(a).Coefficients()));
  Eigen::ComplexEigenSolver<Matrix> es(a, false);
  const auto dense = SortedByReal({es.eigenvalues().data(), es.eigenvalues().data() + 9});
  ASSERT_EQ(companion.size(), 9u);
  for (int i = 0; i < 9; i++)
  {
    EXPECT_LT(std::abs(companion[i] - dense[i]), 1e-12);
  }
}

TEST(PolynomialNepTest, HornerMatchesExplicitPowers)
{
  std::vector<Matrix> c;
  for (int p = 0; p < 5; p++)
  {
    c.push_back(RandomMatrix(6, 6, 30 + p));
  }
  const PolynomialNep t(c);
  EXPECT_EQ(t.Degree(), 4);
  for (Complex z : {Complex(0.0), Complex(0.3, -1.2), Complex(2.5, 0.5)})
  {
    const Matrix ref = testing::EvaluatePolynomial(c, z);
    EXPECT_LE((t.Evaluate(z) - ref).norm(), 1e-14 * ref.norm());
  }
}

TEST(PolynomialNepTest, RejectsMismatchedCoefficients)
{
  EXPECT_THROW(PolynomialNep({}), Error);
  EXPECT_THROW(PolynomialNep({Matrix::Ones(2, 2), Matrix::Ones(3, 3)}), Error);
  EXPECT_THROW(PolynomialNep({Matrix::Ones(2, 3)}), Error);
  EXPECT_THROW(MakeLinear(Matrix::Ones(2, 3)), Error);
}

TEST(ButterflyTest, ShapeAndStructure)
{
  const PolynomialNep t = MakeButterfly();
  EXPECT_EQ(t.Dimension(), 64);
  EXPECT_EQ(t.Degree(), 4);
  EXPECT_EQ(t.Evaluate(0.0), t.Coefficients()[0]);
  // T-even: even coefficients symmetric, odd ones skew-symmetric.
  for (int p = 0; p <= 4; p++)
  {
    const Matrix &a = t.Coefficients()[p];
    const Matrix mirror = (p % 2 == 0) ? Matrix(a.transpose()) : Matrix(-a.transpose());
    EXPECT_EQ(a, mirror) << "p = " << p;
    EXPECT_EQ(a.imag().norm(), 0.0);
  }
}

TEST(ButterflyTest, ThirteenEigenvaluesInsideContour)
{
  const auto values = CompanionEigenvalues(MakeButterfly().Coefficients());
  EXPECT_EQ(values.size(), 256u);
  EXPECT_EQ(CountInside(values, {1.0, 1.0}, 0.5), 13);
}

TEST(DeficientQuadraticTest, SharedEigenvector)
{
  const PolynomialNep t = MakeDeficientQuadratic();
  EXPECT_EQ(kDeficientA, -0.2);
  EXPECT_EQ(kDeficientB, 0.1);
  EXPECT_EQ(t.Dimension(), 15);
  EXPECT_LT(Residual(t, kDeficientA, Vector::Unit(15, 0)), 1e-16);
  EXPECT_LT(Residual(t, kDeficientB, Vector::Unit(15, 0)), 1e-16);
  EXPECT_EQ(t.Coefficients()[0].col(0), (kDeficientA * kDeficientB) * t.Coefficients()[2].col(0));
}

TEST(DeficientQuadraticTest, FourEigenvaluesInsideContour)
{
  const auto values = CompanionEigenvalues(MakeDeficientQuadratic().Coefficients());
  EXPECT_EQ(CountInside(values, 0.0, 0.25), 4);
}

TEST(DeficientQuadraticTest, DeterministicPerSeed)
{
  EXPECT_EQ(MakeDeficientQuadratic(-0.2, 0.1, 5).Coefficients()[1],
            MakeDeficientQuadratic(-0.2, 0.1, 5).Coefficients()[1]);
  EXPECT_NE(MakeDeficientQuadratic(-0.2, 0.1, 5).Coefficients()[1],
            MakeDeficientQuadratic(-0.2, 0.1, 6).Coefficients()[1]);
  EXPECT_THROW(MakeDeficientQuadratic(0.3, 0.3, 0), Error);
}

TEST(HadelerTest, CoefficientsFollowTheClassicalDefinition)
{
  const Index n = 200;
  const GeneralNep t = MakeHadeler();
  ASSERT_EQ(t.Dimension(), n);
  const Matrix &b = t.Coefficients()[0];
  const Matrix &c = t.Coefficients()[1];
  // B_ij = (n + 1 - max(i, j)) i j and C = n I + [1 / (i + j)], 1-based.
  EXPECT_EQ(b(0, 0), Complex(200.0));
  EXPECT_EQ(b(2, 4), Complex(196.0 * 3 * 5));
  EXPECT_EQ(b(199, 199), Complex(1.0 * 200 * 200));
  EXPECT_EQ(c(0, 0), Complex(200.5));
  EXPECT_EQ(c(3, 6), Complex(1.0 / 11.0));
  EXPECT_EQ(b, Matrix(b.transpose()));
  EXPECT_EQ(c, Matrix(c.transpose()));
  EXPECT_EQ(t.Coefficients()[2], Matrix::Identity(n, n));
}

TEST(HadelerTest, EvaluateAtZeroIsMinusAlphaIdentity)
{
  const GeneralNep t = MakeHadeler(30, 7.5);
  EXPECT_EQ(t.Evaluate(0.0), Matrix(-7.5 * Matrix::Identity(30, 30)));
  EXPECT_THROW(MakeHadeler(1, 1.0), Error);
}

TEST(HadelerTest, TwelveEigenvaluesInsideContour)
{
  EXPECT_EQ(testing::InertiaCount(MakeHadeler(), -40.0, -20.0), 12);
}

// Writes a tiny symmetric set of gun-style matrices.
struct SyntheticGun
{
  fs::path dir;

  explicit SyntheticGun(Index n, Index w2_size = -1)
  {
    dir = fs::temp_directory_path() / ("nepcontour_gun_" + std::to_string(::getpid()) + "_" +
                                       std::to_string(n) + "_" + std::to_string(w2_size));
    fs::create_directories(dir);
    auto sym = [](Index size, double diag, double off)
    {
      SparseMatrix m(size, size);
      std::vector<Eigen::Triplet<Complex>> t;
      for (Index i = 0; i < size; i++)
      {
        t.emplace_back(i, i, diag * (1.0 + 0.1 * static_cast<double>(i)));
        if (i + 1 < size)
        {
          t.emplace_back(i, i + 1, off);
          t.emplace_back(i + 1, i, off);
        }
      }
      m.setFromTriplets(t.begin(), t.end());
      return m;
    };
    WriteMatrixMarket(dir / "K.mtx", sym(n, 4.0e4, -1.0e3), false);
    WriteMatrixMarket(dir / "M.mtx", sym(n, 1.0, 0.1), false);
    WriteMatrixMarket(dir / "W1.mtx", sym(n, 2.0, 0.0), false);
    WriteMatrixMarket(dir / "W2.mtx", sym(w2_size < 0 ? n : w2_size, 3.0, 0.5), false);
  }
  ~SyntheticGun() { fs::remove_all(dir); }
};

TEST(GunTest, BranchStructureOnSyntheticData)
{
  const SyntheticGun data(6);
  const SparseGeneralNep t = MakeGun(GunFiles::InDirectory(data.dir));
  ASSERT_EQ(t.Dimension(), 6);
  const auto k = ReadMatrixMarket(data.dir / "K.mtx").ToDense();
  const auto m = ReadMatrixMarket(data.dir / "M.mtx").ToDense();
  const auto w1 = ReadMatrixMarket(data.dir / "W1.mtx").ToDense();
  const auto w2 = ReadMatrixMarket(data.dir / "W2.mtx").ToDense();
  const double lambda = 140000.0;
  ASSERT_GT(lambda, kGunSigma2 * kGunSigma2);
  const Matrix tv = t.Evaluate(lambda);
  EXPECT_LE((tv.real() - (k - lambda * m).real()).norm(), 1e-12 * tv.norm());
  const Eigen::MatrixXd imag_expected =
      (std::sqrt(lambda - kGunSigma1 * kGunSigma1) * w1 +
       std::sqrt(lambda - kGunSigma2 * kGunSigma2) * w2).real();
  EXPECT_LE((tv.imag() - imag_expected).norm(), 1e-12 * tv.norm());
  // Below sigma_2^2 the second root is imaginary and folds into the real part.
  const Complex z = 5000.0;
  const Matrix expected = k - z * m + Complex(0, 1) * std::sqrt(z) * w1 +
                          Complex(0, 1) * std::sqrt(z - kGunSigma2 * kGunSigma2) * w2;
  EXPECT_LE((t.Evaluate(z) - expected).norm(), 1e-12 * expected.norm());
}

TEST(GunTest, IngestionErrors)
{
  const SyntheticGun mismatched(5, 4);
  try
  {
    MakeGun(GunFiles::InDirectory(mismatched.dir));
    FAIL();
  }
  catch (const Error &e)
  {
    EXPECT_EQ(e.code(), ErrorCode::Ingestion);
    EXPECT_NE(std::string(e.what()).find("W2.mtx"), std::string::npos) << e.what();
  }
  const SyntheticGun partial(5);
  fs::remove(partial.dir / "M.mtx");
  EXPECT_FALSE(GunFiles::InDirectory(partial.dir).AllExist());
  try
  {
    MakeGun(GunFiles::InDirectory(partial.dir));
    FAIL();
  }
  catch (const Error &e)
  {
    EXPECT_EQ(e.code(), ErrorCode::Ingestion);
    EXPECT_NE(std::string(e.what()).find("M.mtx"), std::string::npos) << e.what();
  }
}

TEST(GunTest, RealDataDimension)
{
  const char *root = std::getenv("NEPCONTOUR_DATA");
  if (root == nullptr)
  {
    GTEST_SKIP() << "NEPCONTOUR_DATA not set";
  }
  GunFiles files = GunFiles::InDirectory(root);
  if (!files.AllExist())
  {
    files = GunFiles::InDirectory(fs::path(root) / "gun");
  }
  if (!files.AllExist())
  {
    GTEST_SKIP() << "gun matrices not found under " << root;
  }
  EXPECT_EQ(MakeGun(files).Dimension(), 9956);
}

TEST(SparseGeneralNepTest, AgreesWithDenseCounterpart)
{
  std::vector<ScalarFunction> f = {[](Complex z) { return std::exp(z); },
                                   [](Complex z) { return z * z; }};
  const Matrix a = RandomMatrix(7, 7, 1), b = RandomMatrix(7, 7, 2);
  const GeneralNep dense(f, {a, b});
  const SparseGeneralNep sparse(f, {a.sparseView(), b.sparseView()});
  const Complex z(0.3, -0.4);
  const Matrix x = RandomMatrix(7, 3, 3);
  EXPECT_LT((dense.Evaluate(z) - sparse.Evaluate(z)).norm(), 1e-14);
  EXPECT_LT((dense.Apply(z, x) - sparse.Apply(z, x)).norm(), 1e-13);
  EXPECT_NEAR(dense.FrobeniusNormAt(z), sparse.FrobeniusNormAt(z), 1e-13);
  const Matrix y = sparse.Factorize(z)->Solve(x);
  EXPECT_LT((dense.Evaluate(z) * y - x).norm(), 1e-12 * x.norm());
}

TEST(GalleryTest, EvaluateAndFactorizedSolveAgree)
{
  const SyntheticGun gun_data(12);
  const SparseGeneralNep gun = MakeGun(GunFiles::InDirectory(gun_data.dir));
  const PolynomialNep butterfly = MakeButterfly();
  const PolynomialNep quadratic = MakeDeficientQuadratic();
  const GeneralNep hadeler = MakeHadeler();
  const GeneralNep cosine = MakeCosine();
  Matrix a = Matrix::Zero(3, 3);
  a.diagonal() << 0.1, 0.9, 3.0;
  const PolynomialNep linear = MakeLinear(a);
  struct Case
  {
    const NepProblem *problem;
    Contour contour;
  };
  const Case cases[] = {{&butterfly, Contour({1.0, 1.0}, 0.5)},
                        {&quadratic, Contour(0.0, 0.25)},
                        {&hadeler, Contour(-30.0, 10.0)},
                        {&gun, Contour(140000.0, 30000.0)},
                        {&cosine, Contour(1.5707963267948966, 1.0)},
                        {&linear, Contour(0.0, 1.0)}};
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> u(-0.7, 0.7);
  for (const Case &c : cases)
  {
    const Matrix b = RandomMatrix(c.problem->Dimension(), 2, 60);
    for (int s = 0; s < 5; s++)
    {
      const Complex z = c.contour.Center() + c.contour.Radius() * Complex(u(rng), u(rng));
      const Matrix x = c.problem->Factorize(z)->Solve(b);
      EXPECT_LE((c.problem->Evaluate(z) * x - b).norm(), 1e-10 * b.norm());
    }
  }
}

TEST(GalleryTest, EntriesAndDefaults)
{
  for (const char *name : {"butterfly", "deficient-quadratic", "hadeler", "gun"})
  {
    const GalleryEntry *e = FindGalleryEntry(name);
    ASSERT_NE(e, nullptr) << name;
    ASSERT_TRUE(e->defaults.has_value()) << name;
  }
  const GalleryDefaults &b = *FindGalleryEntry("butterfly")->defaults;
  EXPECT_EQ(b.contour.Center(), Complex(1.0, 1.0));
  EXPECT_EQ(b.contour.Radius(), 0.5);
  EXPECT_EQ(b.subspace_size, 30);
  EXPECT_EQ(b.node_count, 16);
  EXPECT_EQ(FindGalleryEntry("deficient-quadratic")->defaults->moment_count, 2);
  EXPECT_EQ(FindGalleryEntry("hadeler")->defaults->subspace_size, 15);
  EXPECT_EQ(FindGalleryEntry("gun")->defaults->node_count, 32);
  EXPECT_FALSE(FindGalleryEntry("linear-diag")->defaults.has_value());
  EXPECT_EQ(FindGalleryEntry("no-such-problem"), nullptr);
}

}  // namespace
}  // namespace nepcontour
