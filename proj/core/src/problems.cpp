// Copyright 2026 The nepcontour Authors. All Rights Reserved.
// SPDX-License-Identifier: Apache-2.0

#include "nepcontour/problems.hpp"

#include <cmath>
#include <numbers>
#include <random>

#include <Eigen/SparseLU>

#include "nepcontour/error.hpp"
#include "nepcontour/linalg.hpp"
#include "nepcontour/matrix_market.hpp"

namespace nepcontour
{

namespace
{

void CheckSquareAndMatching(const auto &coefficients, const char *what)
{
  if (coefficients.empty())
  {
    throw Error(ErrorCode::InvalidParameter, std::string(what) + ": no coefficients");
  }
  const Index n = coefficients.front().rows();
  for (const auto &c : coefficients)
  {
    if (c.rows() != n || c.cols() != n || n == 0)
    {
      throw Error(ErrorCode::InvalidParameter,
                  std::string(what) + ": coefficients must be square and of equal size");
    }
  }
}

}  // namespace

PolynomialNep::PolynomialNep(std::vector<Matrix> coefficients)
  : coefficients_(std::move(coefficients))
{
  CheckSquareAndMatching(coefficients_, "polynomial NEP");
}

Matrix PolynomialNep::Evaluate(Complex z) const
{
  Matrix t = coefficients_.back();
  for (auto it = coefficients_.rbegin() + 1; it != coefficients_.rend(); ++it)
  {
    t = z * t + *it;
  }
  return t;
}

GeneralNep::GeneralNep(std::vector<ScalarFunction> functions, std::vector<Matrix> coefficients)
  : functions_(std::move(functions)), coefficients_(std::move(coefficients))
{
  CheckSquareAndMatching(coefficients_, "general NEP");
  if (functions_.size() != coefficients_.size())
  {
    throw Error(ErrorCode::InvalidParameter, "general NEP: one function per coefficient");
  }
}

Matrix GeneralNep::Evaluate(Complex z) const
{
  Matrix t = Matrix::Zero(Dimension(), Dimension());
  for (std::size_t p = 0; p < coefficients_.size(); p++)
  {
    t += functions_[p](z) * coefficients_[p];
  }
  return t;
}

SparseGeneralNep::SparseGeneralNep(std::vector<ScalarFunction> functions,
                                   std::vector<SparseMatrix> coefficients)
  : functions_(std::move(functions)), coefficients_(std::move(coefficients))
{
  CheckSquareAndMatching(coefficients_, "sparse NEP");
  if (functions_.size() != coefficients_.size())
  {
    throw Error(ErrorCode::InvalidParameter, "sparse NEP: one function per coefficient");
  }
  for (auto &c : coefficients_)
  {
    c.makeCompressed();
  }
}

SparseMatrix SparseGeneralNep::EvaluateSparse(Complex z) const
{
  SparseMatrix t(Dimension(), Dimension());
  for (std::size_t p = 0; p < coefficients_.size(); p++)
  {
    t += functions_[p](z) * coefficients_[p];
  }
  t.makeCompressed();
  return t;
}

Matrix SparseGeneralNep::Evaluate(Complex z) const
{
  return Matrix(EvaluateSparse(z));
}

Matrix SparseGeneralNep::Apply(Complex z, const Matrix &x) const
{
  Matrix out = Matrix::Zero(Dimension(), x.cols());
  for (std::size_t p = 0; p < coefficients_.size(); p++)
  {
    out += functions_[p](z) * (coefficients_[p] * x);
  }
  return out;
}

double SparseGeneralNep::FrobeniusNormAt(Complex z) const
{
  return EvaluateSparse(z).norm();
}

namespace
{

class SparseLuFactorization final : public Factorization
{
public:
  SparseLuFactorization(const SparseMatrix &t, Complex z)
  {
    lu_.analyzePattern(t);
    lu_.factorize(t);
    if (lu_.info() != Eigen::Success)
    {
      std::ostringstream os;
      os.precision(17);
      os << "sparse LU failed at quadrature node z = " << z << ": " << lu_.lastErrorMessage();
      throw Error(ErrorCode::NodeSingular, os.str());
    }
  }

  Matrix Solve(const Matrix &rhs) const override
  {
    Matrix x = lu_.solve(rhs);
    return x;
  }

private:
  // solve() is const but SparseLU is not const-correct for every Eigen version.
  mutable Eigen::SparseLU<SparseMatrix, Eigen::COLAMDOrdering<int>> lu_;
};

Matrix Kron(const Matrix &a, const Matrix &b)
{
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Index i = 0; i < a.rows(); i++)
  {
    for (Index j = 0; j < a.cols(); j++)
    {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

}  // namespace

std::unique_ptr<Factorization> SparseGeneralNep::Factorize(Complex z) const
{
  return std::make_unique<SparseLuFactorization>(EvaluateSparse(z), z);
}

PolynomialNep MakeButterfly()
{
  // 8 x 8 grid, T-even: A0, A2, A4 symmetric and A1, A3 skew-symmetric. The parameter
  // vector runs from the quartic coefficient down.
  constexpr Index m = 8;
  constexpr double c[10] = {0.6, 1.3, 1.3, 0.1, 0.1, 1.2, 1.0, 1.0, 1.2, 1.0};
  const Matrix id = Matrix::Identity(m, m);
  Matrix shift = Matrix::Zero(m, m);
  for (Index i = 0; i + 1 < m; i++)
  {
    shift(i, i + 1) = 1.0;
  }
  const Matrix sym = shift + shift.transpose();
  const Matrix m0 = (4.0 * id + sym) / 6.0;
  const Matrix m1 = shift - shift.transpose();
  const Matrix m2 = sym - 2.0 * id;

  std::vector<Matrix> a(5);
  a[4] = c[0] * Kron(id, m0) + c[1] * Kron(m0, id);
  a[3] = c[2] * Kron(m1, id) + c[3] * Kron(id, m1);
  a[2] = c[4] * Kron(id, m2) + c[5] * Kron(m2, id);
  a[1] = c[6] * Kron(id, m1) + c[7] * Kron(m1, id);
  a[0] = c[8] * Kron(id, m0) + c[9] * Kron(m0, id);
  return PolynomialNep(std::move(a));
}

PolynomialNep MakeDeficientQuadratic(double a, double b, std::uint64_t seed)
{
  if (a == b)
  {
    throw Error(ErrorCode::InvalidParameter, "deficient quadratic needs a != b");
  }
  constexpr Index n = 15;
  std::mt19937_64 rng(seed);
  Matrix t0 = RandomComplexGaussian(n, n, rng);
  const Matrix t1 = RandomComplexGaussian(n, n, rng);
  t0.col(0).setZero();
  // (z - a)(z - b) = z^2 - (a + b) z + ab
  return PolynomialNep({t0 + (a * b) * t1, -(a + b) * t1, t1});
}

GeneralNep MakeHadeler(Index n, double alpha)
{
  if (n < 2)
  {
    throw Error(ErrorCode::InvalidParameter, "hadeler needs n >= 2");
  }
  Matrix b(n, n), c(n, n);
  for (Index i = 1; i <= n; i++)
  {
    for (Index j = 1; j <= n; j++)
    {
      b(i - 1, j - 1) = static_cast<double>((n + 1 - std::max(i, j)) * i * j);
      c(i - 1, j - 1) = (i == j ? static_cast<double>(n) : 0.0) + 1.0 / static_cast<double>(i + j);
    }
  }
  std::vector<ScalarFunction> f = {[](Complex z) { return std::exp(z) - 1.0; },
                                   [](Complex z) { return z * z; },
                                   [alpha](Complex) { return Complex(-alpha); }};
  return GeneralNep(std::move(f), {std::move(b), std::move(c), Matrix::Identity(n, n)});
}

GunFiles GunFiles::InDirectory(const std::filesystem::path &dir)
{
  return {dir / "K.mtx", dir / "M.mtx", dir / "W1.mtx", dir / "W2.mtx"};
}

bool GunFiles::AllExist() const
{
  namespace fs = std::filesystem;
  return fs::exists(k) && fs::exists(m) && fs::exists(w1) && fs::exists(w2);
}

SparseGeneralNep MakeGun(const GunFiles &files)
{
  std::vector<SparseMatrix> mats;
  Index n = -1;
  for (const auto &path : {files.k, files.m, files.w1, files.w2})
  {
    const MarketMatrix mm = ReadMatrixMarket(path);
    if (mm.rows != mm.cols)
    {
      throw Error(ErrorCode::Ingestion, path.string() + ": matrix is not square");
    }
    if (n >= 0 && mm.rows != n)
    {
      throw Error(ErrorCode::Ingestion, path.string() + ": dimension " + std::to_string(mm.rows) +
                                            " does not match " + std::to_string(n));
    }
    n = mm.rows;
    mats.push_back(mm.ToSparse());
  }
  const Complex i(0.0, 1.0);
  std::vector<ScalarFunction> f = {
      [](Complex) { return Complex(1.0); }, [](Complex z) { return -z; },
      [i](Complex z) { return i * std::sqrt(z - kGunSigma1 * kGunSigma1); },
      [i](Complex z) { return i * std::sqrt(z - kGunSigma2 * kGunSigma2); }};
  return SparseGeneralNep(std::move(f), std::move(mats));
}

PolynomialNep MakeLinear(const Matrix &a)
{
  if (a.rows() != a.cols())
  {
    throw Error(ErrorCode::InvalidParameter, "linear NEP needs a square matrix");
  }
  return PolynomialNep({a, -Matrix::Identity(a.rows(), a.cols())});
}

GeneralNep MakeCosine()
{
  return GeneralNep({[](Complex z) { return std::cos(z); }}, {Matrix::Identity(1, 1)});
}

const std::vector<GalleryEntry> &Gallery()
{
  static const std::vector<GalleryEntry> entries = {
      {"butterfly", "quartic T-even polynomial, n = 64",
       GalleryDefaults{Contour({1.0, 1.0}, 0.5), 30, 16, 1}},
      {"deficient-quadratic", "T0 + (z-a)(z-b) T1 with a shared eigenvector, n = 15",
       GalleryDefaults{Contour({0.0, 0.0}, 0.25), 4, 16, 2}},
      {"hadeler", "(e^z - 1) B + z^2 C - alpha I, n = 200, alpha = 100",
       GalleryDefaults{Contour({-30.0, 0.0}, 10.0), 15, 16, 1}},
      {"gun", "radio-frequency gun cavity, n = 9956 (needs K/M/W1/W2 .mtx data)",
       GalleryDefaults{Contour({140000.0, 0.0}, 30000.0), 32, 32, 1}},
      {"cosine", "scalar cos(z)",
       GalleryDefaults{Contour({std::numbers::pi / 2.0, 0.0}, 1.0), 1, 32, 1}},
      {"linear-diag", "A - z I with A = diag(--matrix values)", std::nullopt},
  };
  return entries;
}

const GalleryEntry *FindGalleryEntry(const std::string &name)
{
  for (const auto &e : Gallery())
  {
    if (e.name == name)
    {
      return &e;
    }
  }
  return nullptr;
}

}  // namespace nepcontour
