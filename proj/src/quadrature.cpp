#include "pcurl/quadrature.hpp"

#include <cmath>

namespace pcurl {

const TriangleRule& triangle_rule_degree5() {
  static const TriangleRule rule = [] {
    const double s15 = std::sqrt(15.0);
    const double a1 = (6.0 - s15) / 21.0;
    const double a2 = (6.0 + s15) / 21.0;
    const double w1 = (155.0 - s15) / 2400.0;
    const double w2 = (155.0 + s15) / 2400.0;
    TriangleRule r;
    r.degree = 5;
    r.points = {{1.0 / 3, 1.0 / 3, 1.0 / 3},
                {a1, a1, 1.0 - 2.0 * a1},
                {a1, 1.0 - 2.0 * a1, a1},
                {1.0 - 2.0 * a1, a1, a1},
                {a2, a2, 1.0 - 2.0 * a2},
                {a2, 1.0 - 2.0 * a2, a2},
                {1.0 - 2.0 * a2, a2, a2}};
    r.weights = {9.0 / 80.0, w1, w1, w1, w2, w2, w2};
    return r;
  }();
  return rule;
}

const LineRule& gauss_line4() {
  static const LineRule rule = [] {
    const double inner = std::sqrt(3.0 / 7.0 - 2.0 / 7.0 * std::sqrt(6.0 / 5.0));
    const double outer = std::sqrt(3.0 / 7.0 + 2.0 / 7.0 * std::sqrt(6.0 / 5.0));
    const double w_inner = (18.0 + std::sqrt(30.0)) / 36.0;
    const double w_outer = (18.0 - std::sqrt(30.0)) / 36.0;
    LineRule r;
    r.degree = 7;
    // Map [-1, 1] to [0, 1].
    r.points = {0.5 * (1.0 - outer), 0.5 * (1.0 - inner), 0.5 * (1.0 + inner), 0.5 * (1.0 + outer)};
    r.weights = {0.5 * w_outer, 0.5 * w_inner, 0.5 * w_inner, 0.5 * w_outer};
    return r;
  }();
  return rule;
}

}  // namespace pcurl
