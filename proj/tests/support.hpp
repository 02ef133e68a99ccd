#pragma once

#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "pcurl/mesh.hpp"
#include "pcurl/quadrature.hpp"

namespace testing {

using pcurl::Bary;
using pcurl::TriMesh;
using pcurl::Vec2;

inline std::mt19937_64 rng(std::uint64_t seed) { return std::mt19937_64(seed); }

inline double uniform(std::mt19937_64& g, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(g);
}

// Strictly interior barycentric point.
inline Bary random_bary(std::mt19937_64& g) {
  double a = uniform(g, 0.05, 0.9);
  double b = uniform(g, 0.05, 0.95 - a);
  return {a, b, 1.0 - a - b};
}

inline bool near_rel(double a, double b, double tol) {
  return std::abs(a - b) <= tol * std::max({1.0, std::abs(a), std::abs(b)});
}

// (0,0) (1,0) (0,1)
inline TriMesh reference_triangle() { return TriMesh({{0, 0}, {1, 0}, {0, 1}}, {{0, 1, 2}}); }

// Unit square split along the diagonal (0,0)-(1,1).
inline TriMesh two_triangles() { return TriMesh({{0, 0}, {1, 0}, {0, 1}, {1, 1}}, {{0, 1, 3}, {0, 3, 2}}); }

// Dunavant's 13-point rule (degree 7), weights normalised to the reference area 1/2.
inline pcurl::TriangleRule dunavant13() {
  pcurl::TriangleRule r;
  r.degree = 7;
  auto add3 = [&](double a, double w) {
    const double b = 1.0 - 2.0 * a;
    r.points.push_back({a, a, b});
    r.points.push_back({a, b, a});
    r.points.push_back({b, a, a});
    for (int k = 0; k < 3; ++k) r.weights.push_back(0.5 * w);
  };
  r.points.push_back({1.0 / 3, 1.0 / 3, 1.0 / 3});
  r.weights.push_back(0.5 * -0.149570044467682);
  add3(0.260345966079040, 0.175615257433208);
  add3(0.065130102902216, 0.053347235608838);
  const double a = 0.048690315425316, b = 0.312865496004874, c = 1.0 - a - b;
  for (const Bary& p : std::vector<Bary>{{a, b, c}, {a, c, b}, {b, a, c}, {b, c, a}, {c, a, b}, {c, b, a}}) {
    r.points.push_back(p);
    r.weights.push_back(0.5 * 0.077113760890257);
  }
  return r;
}

}  // namespace testing
