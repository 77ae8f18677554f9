// Copyright 2026 The nepcontour Authors. All Rights Reserved.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <vector>

#include "nepcontour/types.hpp"

namespace nepcontour
{

//
// Circular integration contour. The interior is the open disk |z - center| < radius; the
// boundary itself is outside.
//
class Contour
{
public:
  Contour(Complex center, double radius);

  Complex Center() const { return center_; }
  double Radius() const { return radius_; }

  bool Contains(Complex z) const { return std::abs(z - center_) < radius_; }

  // |z - center| / radius, so values below one are interior.
  double ScaledDistance(Complex z) const { return std::abs(z - center_) / radius_; }

private:
  Complex center_;
  double radius_;
};

// Trapezoidal rule on the circle. The weights absorb 1/(2 pi i) and the arc Jacobian, so
// sum_j weights[j] * f(nodes[j]) approximates (1/(2 pi i)) * integral of f over the circle.
struct QuadratureRule
{
  Contour contour;
  std::vector<Complex> nodes;
  std::vector<Complex> weights;

  Index Size() const { return static_cast<Index>(nodes.size()); }
};

// z_j = c + r exp(2 pi i j / N), w_j = (z_j - c) / N for j = 0..N-1. Requires N >= 2.
QuadratureRule TrapezoidRule(const Contour &contour, int num_nodes);

}  // namespace nepcontour
