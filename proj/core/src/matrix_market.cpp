// Copyright 2026 The nepcontour Authors. All Rights Reserved.
// SPDX-License-Identifier: Apache-2.0

#include "nepcontour/matrix_market.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "nepcontour/error.hpp"

namespace nepcontour
{

namespace
{

std::string Lower(std::string s)
{
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return s;
}

bool IsBlank(const std::string &line)
{
  return std::all_of(line.begin(), line.end(),
                     [](unsigned char c) { return std::isspace(c) != 0; });
}

class LineReader
{
public:
  LineReader(std::istream &in, const std::string &source) : in_(in), source_(source) {}

  // Next line that is neither a comment nor blank.
  bool NextData(std::string &line)
  {
    while (std::getline(in_, line))
    {
      line_no_++;
      if (!line.empty() && line.back() == '\r')
      {
        line.pop_back();
      }
      if (line.empty() || line[0] == '%' || IsBlank(line))
      {
        continue;
      }
      return true;
    }
    return false;
  }

  bool NextRaw(std::string &line)
  {
    if (!std::getline(in_, line))
    {
      return false;
    }
    line_no_++;
    if (!line.empty() && line.back() == '\r')
    {
      line.pop_back();
    }
    return true;
  }

  [[noreturn]] void Fail(const std::string &msg) const
  {
    throw Error(ErrorCode::Parse, source_ + ":" + std::to_string(line_no_) + ": " + msg);
  }

private:
  std::istream &in_;
  const std::string &source_;
  long line_no_ = 0;
};

struct Header
{
  MarketFormat format;
  MarketField field;
  MarketSymmetry symmetry;
};

Header ParseHeader(LineReader &reader)
{
  std::string line;
  if (!reader.NextRaw(line))
  {
    reader.Fail("empty file, expected a %%MatrixMarket header");
  }
  std::istringstream ss(line);
  std::string banner, object, format, field, symmetry;
  ss >> banner >> object >> format >> field >> symmetry;
  if (banner != "%%MatrixMarket")
  {
    reader.Fail("missing %%MatrixMarket banner");
  }
  if (Lower(object) != "matrix")
  {
    reader.Fail("unsupported object '" + object + "'");
  }
  Header h{};
  format = Lower(format);
  if (format == "coordinate")
  {
    h.format = MarketFormat::Coordinate;
  }
  else if (format == "array")
  {
    h.format = MarketFormat::Array;
  }
  else
  {
    reader.Fail("unsupported format '" + format + "'");
  }
  field = Lower(field);
  if (field == "real" || field == "double")
  {
    h.field = MarketField::Real;
  }
  else if (field == "complex")
  {
    h.field = MarketField::Complex;
  }
  else if (field == "integer")
  {
    h.field = MarketField::Integer;
  }
  else if (field == "pattern")
  {
    h.field = MarketField::Pattern;
  }
  else
  {
    reader.Fail("unsupported field '" + field + "'");
  }
  symmetry = Lower(symmetry);
  if (symmetry == "general")
  {
    h.symmetry = MarketSymmetry::General;
  }
  else if (symmetry == "symmetric")
  {
    h.symmetry = MarketSymmetry::Symmetric;
  }
  else if (symmetry == "skew-symmetric")
  {
    h.symmetry = MarketSymmetry::SkewSymmetric;
  }
  else if (symmetry == "hermitian")
  {
    h.symmetry = MarketSymmetry::Hermitian;
  }
  else
  {
    reader.Fail("unsupported symmetry '" + symmetry + "'");
  }
  if (h.format == MarketFormat::Array && h.field == MarketField::Pattern)
  {
    reader.Fail("pattern field is only valid for coordinate format");
  }
  if (h.symmetry == MarketSymmetry::Hermitian && h.field != MarketField::Complex)
  {
    reader.Fail("hermitian symmetry requires the complex field");
  }
  return h;
}

// Reads the value part of an entry according to the field.
Complex ParseValue(std::istringstream &ss, MarketField field, LineReader &reader)
{
  double re = 0.0, im = 0.0;
  switch (field)
  {
    case MarketField::Pattern:
      return {1.0, 0.0};
    case MarketField::Complex:
      if (!(ss >> re >> im))
      {
        reader.Fail("expected real and imaginary parts");
      }
      return {re, im};
    case MarketField::Real:
    case MarketField::Integer:
      if (!(ss >> re))
      {
        reader.Fail("expected a numeric value");
      }
      return {re, 0.0};
  }
  return {};
}

void ExpectEnd(std::istringstream &ss, LineReader &reader)
{
  std::string extra;
  if (ss >> extra)
  {
    reader.Fail("unexpected trailing token '" + extra + "'");
  }
}

// Adds the mirrored entry implied by symmetric storage.
void AddMirrored(std::vector<Eigen::Triplet<Complex>> &entries, MarketSymmetry sym, Index i,
                 Index j, Complex v)
{
  entries.emplace_back(i, j, v);
  if (i == j || sym == MarketSymmetry::General)
  {
    return;
  }
  switch (sym)
  {
    case MarketSymmetry::Symmetric:
      entries.emplace_back(j, i, v);
      break;
    case MarketSymmetry::SkewSymmetric:
      entries.emplace_back(j, i, -v);
      break;
    case MarketSymmetry::Hermitian:
      entries.emplace_back(j, i, std::conj(v));
      break;
    case MarketSymmetry::General:
      break;
  }
}

}  // namespace

MarketMatrix ReadMatrixMarket(std::istream &in, const std::string &source_name)
{
  LineReader reader(in, source_name);
  const Header h = ParseHeader(reader);

  MarketMatrix mm;
  mm.format = h.format;
  mm.field = h.field;
  mm.symmetry = h.symmetry;

  std::string line;
  if (!reader.NextData(line))
  {
    reader.Fail("missing size line");
  }
  long long rows = 0, cols = 0, nnz = 0;
  {
    std::istringstream ss(line);
    if (!(ss >> rows >> cols))
    {
      reader.Fail("malformed size line");
    }
    if (h.format == MarketFormat::Coordinate && !(ss >> nnz))
    {
      reader.Fail("coordinate size line needs rows, cols and entry count");
    }
    ExpectEnd(ss, reader);
  }
  if (rows < 0 || cols < 0 || nnz < 0)
  {
    reader.Fail("negative size");
  }
  if (h.symmetry != MarketSymmetry::General && rows != cols)
  {
    reader.Fail("symmetric storage requires a square matrix");
  }
  mm.rows = rows;
  mm.cols = cols;

  if (h.format == MarketFormat::Coordinate)
  {
    mm.entries.reserve(h.symmetry == MarketSymmetry::General ? nnz : 2 * nnz);
    for (long long k = 0; k < nnz; k++)
    {
      if (!reader.NextData(line))
      {
        reader.Fail("expected " + std::to_string(nnz) + " entries, found " + std::to_string(k));
      }
      std::istringstream ss(line);
      long long i = 0, j = 0;
      if (!(ss >> i >> j))
      {
        reader.Fail("malformed entry indices");
      }
      if (i < 1 || i > rows || j < 1 || j > cols)
      {
        reader.Fail("entry index (" + std::to_string(i) + ", " + std::to_string(j) +
                    ") out of range");
      }
      const Complex v = ParseValue(ss, h.field, reader);
      ExpectEnd(ss, reader);
      if (h.symmetry != MarketSymmetry::General && i < j)
      {
        reader.Fail("symmetric storage lists only the lower triangle");
      }
      if (h.symmetry == MarketSymmetry::SkewSymmetric && i == j)
      {
        reader.Fail("skew-symmetric storage has no diagonal entries");
      }
      AddMirrored(mm.entries, h.symmetry, i - 1, j - 1, v);
    }
  }
  else
  {
    // Column-major; symmetric variants store the lower triangle only.
    for (long long j = 0; j < cols; j++)
    {
      long long first = 0;
      if (h.symmetry == MarketSymmetry::SkewSymmetric)
      {
        first = j + 1;
      }
      else if (h.symmetry != MarketSymmetry::General)
      {
        first = j;
      }
      for (long long i = first; i < rows; i++)
      {
        if (!reader.NextData(line))
        {
          reader.Fail("array data ended early at entry (" + std::to_string(i + 1) + ", " +
                      std::to_string(j + 1) + ")");
        }
        std::istringstream ss(line);
        const Complex v = ParseValue(ss, h.field, reader);
        ExpectEnd(ss, reader);
        if (v != Complex(0.0))
        {
          AddMirrored(mm.entries, h.symmetry, i, j, v);
        }
      }
    }
  }
  if (reader.NextData(line))
  {
    reader.Fail("unexpected data after the last entry");
  }
  return mm;
}

MarketMatrix ReadMatrixMarket(const std::filesystem::path &path)
{
  std::ifstream in(path);
  if (!in)
  {
    throw Error(ErrorCode::Ingestion, "cannot open Matrix Market file " + path.string());
  }
  return ReadMatrixMarket(in, path.string());
}

Matrix MarketMatrix::ToDense() const
{
  Matrix out = Matrix::Zero(rows, cols);
  for (const auto &t : entries)
  {
    out(t.row(), t.col()) += t.value();
  }
  return out;
}

SparseMatrix MarketMatrix::ToSparse() const
{
  SparseMatrix out(rows, cols);
  out.setFromTriplets(entries.begin(), entries.end());
  return out;
}

void WriteMatrixMarket(std::ostream &out, const SparseMatrix &a, bool complex_field)
{
  out << "%%MatrixMarket matrix coordinate " << (complex_field ? "complex" : "real")
      << " general\n";
  out << a.rows() << " " << a.cols() << " " << a.nonZeros() << "\n";
  out << std::setprecision(17);
  for (Index k = 0; k < a.outerSize(); k++)
  {
    for (SparseMatrix::InnerIterator it(a, k); it; ++it)
    {
      out << it.row() + 1 << " " << it.col() + 1 << " " << it.value().real();
      if (complex_field)
      {
        out << " " << it.value().imag();
      }
      out << "\n";
    }
  }
}

void WriteMatrixMarket(const std::filesystem::path &path, const SparseMatrix &a,
                       bool complex_field)
{
  std::ofstream out(path);
  if (!out)
  {
    throw Error(ErrorCode::Ingestion, "cannot write Matrix Market file " + path.string());
  }
  WriteMatrixMarket(out, a, complex_field);
}

}  // namespace nepcontour
