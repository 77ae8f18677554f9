// Copyright 2026 The nepcontour Authors. All Rights Reserved.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "nepcontour/contour.hpp"
#include "nepcontour/nep.hpp"
#include "nepcontour/types.hpp"

namespace nepcontour
{

// T(z) = sum_p z^p coefficients[p], evaluated by Horner's rule.
class PolynomialNep final : public NepProblem
{
public:
  explicit PolynomialNep(std::vector<Matrix> coefficients);

  Index Dimension() const override { return coefficients_.front().rows(); }
  Matrix Evaluate(Complex z) const override;

  int Degree() const { return static_cast<int>(coefficients_.size()) - 1; }
  const std::vector<Matrix> &Coefficients() const { return coefficients_; }

private:
  std::vector<Matrix> coefficients_;
};

using ScalarFunction = std::function<Complex(Complex)>;

// T(z) = sum_p f_p(z) C_p with dense coefficients.
class GeneralNep final : public NepProblem
{
public:
  GeneralNep(std::vector<ScalarFunction> functions, std::vector<Matrix> coefficients);

  Index Dimension() const override { return coefficients_.front().rows(); }
  Matrix Evaluate(Complex z) const override;

  const std::vector<Matrix> &Coefficients() const { return coefficients_; }
  Complex Coefficient(std::size_t p, Complex z) const { return functions_[p](z); }

private:
  std::vector<ScalarFunction> functions_;
  std::vector<Matrix> coefficients_;
};

// T(z) = sum_p f_p(z) C_p with sparse coefficients, factorized by sparse LU. Evaluate()
// densifies and is only meant for small instances.
class SparseGeneralNep final : public NepProblem
{
public:
  SparseGeneralNep(std::vector<ScalarFunction> functions, std::vector<SparseMatrix> coefficients);

  Index Dimension() const override { return coefficients_.front().rows(); }
  Matrix Evaluate(Complex z) const override;
  Matrix Apply(Complex z, const Matrix &x) const override;
  double FrobeniusNormAt(Complex z) const override;
  std::unique_ptr<Factorization> Factorize(Complex z) const override;

  SparseMatrix EvaluateSparse(Complex z) const;

private:
  std::vector<ScalarFunction> functions_;
  std::vector<SparseMatrix> coefficients_;
};

// Quartic T-even butterfly problem, n = 64 (8 x 8 grid).
PolynomialNep MakeButterfly();

inline constexpr double kDeficientA = -0.2;
inline constexpr double kDeficientB = 0.1;
// First seed whose random T0, T1 give exactly four eigenvalues inside |z| < 0.25, with every
// eigenvalue at least 0.05 from that circle.
inline constexpr std::uint64_t kDeficientSeed = 27;

// T(z) = T0 + (z - a)(z - b) T1, n = 15, with the first column of T0 zeroed so that a and b
// share the eigenvector e_1.
PolynomialNep MakeDeficientQuadratic(double a = kDeficientA, double b = kDeficientB,
                                     std::uint64_t seed = kDeficientSeed);

// T(z) = (e^z - 1) B + z^2 C - alpha I.
GeneralNep MakeHadeler(Index n = 200, double alpha = 100.0);

inline constexpr double kGunSigma1 = 0.0;
inline constexpr double kGunSigma2 = 108.8774;

// Paths of the gun stiffness, mass and the two damping matrices.
struct GunFiles
{
  std::filesystem::path k, m, w1, w2;

  // <dir>/K.mtx, <dir>/M.mtx, <dir>/W1.mtx, <dir>/W2.mtx
  static GunFiles InDirectory(const std::filesystem::path &dir);
  bool AllExist() const;
};

// T(z) = K - z M + i sqrt(z - s1^2) W1 + i sqrt(z - s2^2) W2, principal square roots.
SparseGeneralNep MakeGun(const GunFiles &files);

// T(z) = A - z I.
PolynomialNep MakeLinear(const Matrix &a);

// Scalar T(z) = cos(z).
GeneralNep MakeCosine();

// Parameters used for a gallery problem when the caller gives none.
struct GalleryDefaults
{
  Contour contour;
  Index subspace_size;
  int node_count;
  int moment_count;
};

struct GalleryEntry
{
  std::string name;
  std::string description;
  std::optional<GalleryDefaults> defaults;
};

const std::vector<GalleryEntry> &Gallery();
const GalleryEntry *FindGalleryEntry(const std::string &name);

}  // namespace nepcontour
