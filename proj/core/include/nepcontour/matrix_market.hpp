// Copyright 2026 The nepcontour Authors. All Rights Reserved.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "nepcontour/types.hpp"

namespace nepcontour
{

enum class MarketFormat
{
  Coordinate,
  Array
};

enum class MarketField
{
  Real,
  Complex,
  Integer,
  Pattern
};

enum class MarketSymmetry
{
  General,
  Symmetric,
  SkewSymmetric,
  Hermitian
};

// Parsed Matrix Market matrix. Entries are 0-based with symmetric storage already
// expanded; duplicates (legal in coordinate files) are summed on conversion.
struct MarketMatrix
{
  Index rows = 0;
  Index cols = 0;
  MarketFormat format = MarketFormat::Coordinate;
  MarketField field = MarketField::Real;
  MarketSymmetry symmetry = MarketSymmetry::General;
  std::vector<Eigen::Triplet<Complex>> entries;

  Matrix ToDense() const;
  SparseMatrix ToSparse() const;
};

// Throws ErrorCode::Ingestion when the file cannot be opened and ErrorCode::Parse, with the
// offending line number, for malformed content.
MarketMatrix ReadMatrixMarket(const std::filesystem::path &path);
MarketMatrix ReadMatrixMarket(std::istream &in, const std::string &source_name);

// Writes a general coordinate file; real field when complex_field is false (imaginary
// parts are dropped).
void WriteMatrixMarket(std::ostream &out, const SparseMatrix &a, bool complex_field);
void WriteMatrixMarket(const std::filesystem::path &path, const SparseMatrix &a,
                       bool complex_field);

}  // namespace nepcontour
