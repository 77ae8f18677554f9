// Copyright 2026 The nepcontour Authors. All Rights Reserved.
// SPDX-License-Identifier: Apache-2.0

#include "nepcontour/contour.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "nepcontour/error.hpp"

namespace nepcontour
{

Contour::Contour(Complex center, double radius) : center_(center), radius_(radius)
{
  if (!(radius > 0.0) || !std::isfinite(radius))
  {
    throw Error(ErrorCode::InvalidParameter,
                "contour radius must be positive and finite, got " + std::to_string(radius));
  }
  if (!std::isfinite(center.real()) || !std::isfinite(center.imag()))
  {
    throw Error(ErrorCode::InvalidParameter, "contour center must be finite");
  }
}

namespace
{

// exp(2 pi i j / n), with the four axis points exact.
Complex UnitRoot(int j, int n)
{
  if ((4 * j) % n == 0)
  {
    switch ((4 * j) / n)
    {
      case 0:
        return {1.0, 0.0};
      case 1:
        return {0.0, 1.0};
      case 2:
        return {-1.0, 0.0};
      case 3:
        return {0.0, -1.0};
    }
  }
  const double theta = 2.0 * std::numbers::pi * static_cast<double>(j) / static_cast<double>(n);
  return {std::cos(theta), std::sin(theta)};
}

}  // namespace

QuadratureRule TrapezoidRule(const Contour &contour, int num_nodes)
{
  if (num_nodes < 2)
  {
    throw Error(ErrorCode::InvalidParameter,
                "quadrature needs at least 2 nodes, got " + std::to_string(num_nodes));
  }
  QuadratureRule rule{contour, {}, {}};
  rule.nodes.reserve(num_nodes);
  rule.weights.reserve(num_nodes);
  const double r = contour.Radius();
  for (int j = 0; j < num_nodes; j++)
  {
    const Complex offset = r * UnitRoot(j, num_nodes);
    rule.nodes.push_back(contour.Center() + offset);
    rule.weights.push_back(offset / static_cast<double>(num_nodes));
  }
  return rule;
}

}  // namespace nepcontour
