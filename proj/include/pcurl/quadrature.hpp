#pragma once

#include <array>
#include <vector>

#include "pcurl/mesh.hpp"

namespace pcurl {

/// Rule on the reference triangle; weights sum to its area 1/2.
struct TriangleRule {
  std::vector<Bary> points;
  std::vector<double> weights;
  int degree = 0;
};

/// Rule on the reference edge [0, 1]; weights sum to 1.
struct LineRule {
  std::vector<double> points;
  std::vector<double> weights;
  int degree = 0;
};

/// 7-point rule, exact for total degree <= 5.
const TriangleRule& triangle_rule_degree5();

/// 4-point Gauss-Legendre on [0, 1], exact for degree <= 7.
const LineRule& gauss_line4();

}  // namespace pcurl
