// Copyright 2026 The nepcontour Authors. All Rights Reserved.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <stdexcept>
#include <string>

namespace nepcontour
{

enum class ErrorCode
{
  InvalidParameter,
  DegenerateProblem,   // T(lambda) vanishes identically
  EmptySubspace,       // every singular value was filtered
  RankDeficient,       // QR of a numerically rank-deficient block
  SingularTriangular,
  NonConvergence,      // dense eigensolver failed
  NodeSingular,        // quadrature node on (or too near) an eigenvalue
  NearPole,            // Ritz value too close to a quadrature node
  DeflationUnderflow,
  Ingestion,           // missing file, bad dimensions
  Parse                // malformed Matrix Market content
};

const char *ToString(ErrorCode code) noexcept;

// Single exception type for the library; callers dispatch on code().
class Error : public std::runtime_error
{
public:
  Error(ErrorCode code, const std::string &what);

  ErrorCode code() const noexcept { return code_; }

private:
  ErrorCode code_;
};

}  // namespace nepcontour
