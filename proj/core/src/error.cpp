// Copyright 2026 The nepcontour Authors. All Rights Reserved.
// SPDX-License-Identifier: Apache-2.0

#include "nepcontour/error.hpp"

namespace nepcontour
{

const char *ToString(ErrorCode code) noexcept
{
  switch (code)
  {
    case ErrorCode::InvalidParameter:
      return "invalid-parameter";
    case ErrorCode::DegenerateProblem:
      return "degenerate-problem";
    case ErrorCode::EmptySubspace:
      return "empty-subspace";
    case ErrorCode::RankDeficient:
      return "rank-deficient";
    case ErrorCode::SingularTriangular:
      return "singular-triangular";
    case ErrorCode::NonConvergence:
      return "non-convergence";
    case ErrorCode::NodeSingular:
      return "node-singular";
    case ErrorCode::NearPole:
      return "near-pole";
    case ErrorCode::DeflationUnderflow:
      return "deflation-underflow";
    case ErrorCode::Ingestion:
      return "ingestion";
    case ErrorCode::Parse:
      return "parse";
  }
  return "unknown";
}

Error::Error(ErrorCode code, const std::string &what)
  : std::runtime_error(std::string(ToString(code)) + ": " + what), code_(code)
{
}

}  // namespace nepcontour
