#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

namespace pcurl {

struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  friend constexpr Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
  friend constexpr Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
  friend constexpr Vec2 operator*(double s, Vec2 a) { return {s * a.x, s * a.y}; }
  friend constexpr Vec2 operator*(Vec2 a, double s) { return {s * a.x, s * a.y}; }
  constexpr Vec2& operator+=(Vec2 b) {
    x += b.x;
    y += b.y;
    return *this;
  }
  friend constexpr bool operator==(Vec2, Vec2) = default;
};

constexpr double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }
/// Scalar (z-component) cross product.
constexpr double cross(Vec2 a, Vec2 b) { return a.x * b.y - a.y * b.x; }
inline double norm(Vec2 a) { return std::hypot(a.x, a.y); }

/// Barycentric coordinates (lambda0, lambda1, lambda2) of a point in a triangle.
using Bary = std::array<double, 3>;

/// A triangle's view of one of its edges. Local edge k runs from local vertex
/// k to local vertex (k+1)%3; `sign` is +1 when that direction agrees with the
/// global orientation (lower to higher vertex index).
struct EdgeRef {
  std::int32_t edge = -1;
  std::int8_t sign = 1;
};

/// Conforming triangulation with global edge numbering. Immutable once built;
/// the constructor validates topology and derives every edge quantity.
class TriMesh {
 public:
  using Triangle = std::array<std::int32_t, 3>;
  using Edge = std::array<std::int32_t, 2>;

  /// Throws ValidationError ("negative area", "non-manifold edge", bad index).
  TriMesh(std::vector<Vec2> vertices, std::vector<Triangle> triangles);

  std::size_t num_vertices() const { return vertices_.size(); }
  std::size_t num_triangles() const { return triangles_.size(); }
  std::size_t num_edges() const { return edges_.size(); }

  std::span<const Vec2> vertices() const { return vertices_; }
  std::span<const Triangle> triangles() const { return triangles_; }
  /// Edges as (lo, hi) with lo < hi, sorted lexicographically.
  std::span<const Edge> edges() const { return edges_; }
  std::span<const std::array<EdgeRef, 3>> tri_edges() const { return tri_edges_; }

  Vec2 vertex(std::size_t v) const { return vertices_[v]; }
  const Triangle& triangle(std::size_t t) const { return triangles_[t]; }
  const Edge& edge(std::size_t e) const { return edges_[e]; }
  const std::array<EdgeRef, 3>& tri_edge(std::size_t t) const { return tri_edges_[t]; }

  bool is_boundary_edge(std::size_t e) const { return boundary_flags_[e] != 0; }
  std::span<const std::int32_t> boundary_edges() const { return boundary_edges_; }
  std::span<const std::int32_t> interior_edges() const { return interior_edges_; }

  /// Triangles adjacent to edge e; the second entry is -1 on the boundary.
  const std::array<std::int32_t, 2>& edge_triangles(std::size_t e) const { return edge_tris_[e]; }

  double area(std::size_t t) const { return areas_[t]; }
  /// Element size: diameter of the inscribed circle.
  double h_K(std::size_t t) const { return h_K_[t]; }
  /// Edge size: Euclidean length.
  double h_F(std::size_t e) const { return h_F_[e]; }
  std::span<const double> h_K() const { return h_K_; }
  std::span<const double> h_F() const { return h_F_; }

  /// max over triangles of h_K.
  double mesh_size() const;
  double total_area() const;
  /// min over triangles of 2*inradius / longest edge.
  double shape_regularity() const;

  Vec2 centroid(std::size_t t) const;
  Vec2 edge_midpoint(std::size_t e) const;
  /// Physical point of a barycentric coordinate in triangle t.
  Vec2 point(std::size_t t, const Bary& b) const;

 private:
  std::vector<Vec2> vertices_;
  std::vector<Triangle> triangles_;
  std::vector<Edge> edges_;
  std::vector<std::array<EdgeRef, 3>> tri_edges_;
  std::vector<std::uint8_t> boundary_flags_;
  std::vector<std::int32_t> boundary_edges_;
  std::vector<std::int32_t> interior_edges_;
  std::vector<std::array<std::int32_t, 2>> edge_tris_;
  std::vector<double> areas_;
  std::vector<double> h_K_;
  std::vector<double> h_F_;
};

/// 8-triangle fan of the unit disk refined `refinement_level` times.
TriMesh disk_mesh(int refinement_level);

/// 1-to-4 split via edge midpoints. With `project_to_circle`, midpoints of
/// boundary edges are moved radially onto the unit circle.
TriMesh refine_uniform(const TriMesh& mesh, bool project_to_circle = true);

/// ASCII format: `pcurlmesh 1`, `vertices N` + N lines `x y`,
/// `triangles M` + M lines `v0 v1 v2`. Floats carry 17 significant digits.
void write_mesh(const TriMesh& mesh, const std::filesystem::path& path);
TriMesh read_mesh(const std::filesystem::path& path);

}  // namespace pcurl
