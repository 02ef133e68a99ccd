#include "pcurl/mesh.hpp"

#include <algorithm>
#include <fstream>
#include <iomanip>
#include <limits>
#include <numbers>
#include <sstream>
#include <string>

#include "pcurl/error.hpp"

namespace pcurl {

namespace {

double signed_area(Vec2 a, Vec2 b, Vec2 c) { return 0.5 * cross(b - a, c - a); }

}  // namespace

TriMesh::TriMesh(std::vector<Vec2> vertices, std::vector<Triangle> triangles)
    : vertices_(std::move(vertices)), triangles_(std::move(triangles)) {
  const auto nv = static_cast<std::int32_t>(vertices_.size());
  for (std::size_t t = 0; t < triangles_.size(); ++t) {
    for (auto v : triangles_[t]) {
      if (v < 0 || v >= nv) {
        throw ValidationError("triangle " + std::to_string(t) + ": vertex index " +
                              std::to_string(v) + " out of range");
      }
    }
    const auto& tri = triangles_[t];
    if (tri[0] == tri[1] || tri[1] == tri[2] || tri[0] == tri[2]) {
      throw ValidationError("triangle " + std::to_string(t) + ": repeated vertex");
    }
  }

  areas_.resize(triangles_.size());
  for (std::size_t t = 0; t < triangles_.size(); ++t) {
    const auto& tri = triangles_[t];
    areas_[t] = signed_area(vertices_[tri[0]], vertices_[tri[1]], vertices_[tri[2]]);
    if (!(areas_[t] > 0.0)) {
      throw ValidationError("triangle " + std::to_string(t) + ": negative area");
    }
  }

  // Collect (lo, hi) keys, then number them in sorted order so that edge
  // indices do not depend on the triangle ordering.
  std::vector<Edge> keys;
  keys.reserve(3 * triangles_.size());
  for (const auto& tri : triangles_) {
    for (int k = 0; k < 3; ++k) {
      const auto a = tri[k];
      const auto b = tri[(k + 1) % 3];
      keys.push_back({std::min(a, b), std::max(a, b)});
    }
  }
  std::sort(keys.begin(), keys.end());
  keys.erase(std::unique(keys.begin(), keys.end()), keys.end());
  edges_ = std::move(keys);

  auto find_edge = [this](std::int32_t lo, std::int32_t hi) {
    const auto it = std::lower_bound(edges_.begin(), edges_.end(), Edge{lo, hi});
    return static_cast<std::int32_t>(it - edges_.begin());
  };

  edge_tris_.assign(edges_.size(), {-1, -1});
  std::vector<int> uses(edges_.size(), 0);
  tri_edges_.resize(triangles_.size());
  for (std::size_t t = 0; t < triangles_.size(); ++t) {
    const auto& tri = triangles_[t];
    for (int k = 0; k < 3; ++k) {
      const auto a = tri[k];
      const auto b = tri[(k + 1) % 3];
      const auto e = find_edge(std::min(a, b), std::max(a, b));
      tri_edges_[t][k] = EdgeRef{e, static_cast<std::int8_t>(a < b ? 1 : -1)};
      if (uses[e] >= 2) {
        throw ValidationError("edge (" + std::to_string(edges_[e][0]) + "," +
                              std::to_string(edges_[e][1]) + "): non-manifold edge");
      }
      edge_tris_[e][uses[e]++] = static_cast<std::int32_t>(t);
    }
  }

  boundary_flags_.resize(edges_.size());
  h_F_.resize(edges_.size());
  for (std::size_t e = 0; e < edges_.size(); ++e) {
    boundary_flags_[e] = uses[e] == 1 ? 1 : 0;
    (uses[e] == 1 ? boundary_edges_ : interior_edges_).push_back(static_cast<std::int32_t>(e));
    h_F_[e] = norm(vertices_[edges_[e][1]] - vertices_[edges_[e][0]]);
  }

  h_K_.resize(triangles_.size());
  for (std::size_t t = 0; t < triangles_.size(); ++t) {
    double perimeter = 0.0;
    for (const auto& ref : tri_edges_[t]) perimeter += h_F_[ref.edge];
    h_K_[t] = 4.0 * areas_[t] / perimeter;  // 2 * (area / semiperimeter)
  }
}

double TriMesh::mesh_size() const { return *std::max_element(h_K_.begin(), h_K_.end()); }

double TriMesh::total_area() const {
  double sum = 0.0;
  for (double a : areas_) sum += a;
  return sum;
}

double TriMesh::shape_regularity() const {
  double worst = std::numeric_limits<double>::infinity();
  for (std::size_t t = 0; t < triangles_.size(); ++t) {
    double longest = 0.0;
    for (const auto& ref : tri_edges_[t]) longest = std::max(longest, h_F_[ref.edge]);
    worst = std::min(worst, h_K_[t] / longest);
  }
  return worst;
}

Vec2 TriMesh::centroid(std::size_t t) const { return point(t, {1.0 / 3, 1.0 / 3, 1.0 / 3}); }

Vec2 TriMesh::edge_midpoint(std::size_t e) const {
  return 0.5 * (vertices_[edges_[e][0]] + vertices_[edges_[e][1]]);
}

Vec2 TriMesh::point(std::size_t t, const Bary& b) const {
  const auto& tri = triangles_[t];
  return b[0] * vertices_[tri[0]] + b[1] * vertices_[tri[1]] + b[2] * vertices_[tri[2]];
}

TriMesh disk_mesh(int refinement_level) {
  if (refinement_level < 0) throw InvalidArgument("refinement level must be nonnegative");
  constexpr int kSpokes = 8;
  std::vector<Vec2> vertices{{0.0, 0.0}};
  for (int k = 0; k < kSpokes; ++k) {
    const double theta = 2.0 * std::numbers::pi * k / kSpokes;
    vertices.push_back({std::cos(theta), std::sin(theta)});
  }
  std::vector<TriMesh::Triangle> triangles;
  for (int k = 0; k < kSpokes; ++k) {
    triangles.push_back({0, 1 + k, 1 + (k + 1) % kSpokes});
  }
  TriMesh mesh(std::move(vertices), std::move(triangles));
  for (int level = 0; level < refinement_level; ++level) mesh = refine_uniform(mesh);
  return mesh;
}

TriMesh refine_uniform(const TriMesh& mesh, bool project_to_circle) {
  std::vector<Vec2> vertices(mesh.vertices().begin(), mesh.vertices().end());
  const auto base = static_cast<std::int32_t>(vertices.size());
  for (std::size_t e = 0; e < mesh.num_edges(); ++e) {
    Vec2 mid = mesh.edge_midpoint(e);
    if (project_to_circle && mesh.is_boundary_edge(e)) mid = (1.0 / norm(mid)) * mid;
    vertices.push_back(mid);
  }

  std::vector<TriMesh::Triangle> triangles;
  triangles.reserve(4 * mesh.num_triangles());
  for (std::size_t t = 0; t < mesh.num_triangles(); ++t) {
    const auto& v = mesh.triangle(t);
    const auto& te = mesh.tri_edge(t);
    // m[k] is the midpoint of local edge k = (v[k], v[k+1]).
    const std::int32_t m0 = base + te[0].edge;
    const std::int32_t m1 = base + te[1].edge;
    const std::int32_t m2 = base + te[2].edge;
    triangles.push_back({v[0], m0, m2});
    triangles.push_back({m0, v[1], m1});
    triangles.push_back({m2, m1, v[2]});
    triangles.push_back({m0, m1, m2});
  }
  return TriMesh(std::move(vertices), std::move(triangles));
}

void write_mesh(const TriMesh& mesh, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw Error("cannot open " + path.string() + " for writing");
  out << std::setprecision(17);
  out << "pcurlmesh 1\n";
  out << "vertices " << mesh.num_vertices() << '\n';
  for (const auto& v : mesh.vertices()) out << v.x << ' ' << v.y << '\n';
  out << "triangles " << mesh.num_triangles() << '\n';
  for (const auto& t : mesh.triangles()) out << t[0] << ' ' << t[1] << ' ' << t[2] << '\n';
  if (!out) throw Error("write failed: " + path.string());
}

namespace {

class LineReader {
 public:
  explicit LineReader(std::istream& in) : in_(in) {}

  // Next non-blank line; throws at end of input.
  std::istringstream next(const char* expecting) {
    std::string text;
    while (std::getline(in_, text)) {
      ++line_;
      if (text.find_first_not_of(" \t\r") != std::string::npos) return std::istringstream(text);
    }
    throw ParseError(line_ + 1, std::string("unexpected end of file, expected ") + expecting);
  }
  int line() const { return line_; }

 private:
  std::istream& in_;
  int line_ = 0;
};

void expect_done(std::istringstream& row, int line) {
  std::string extra;
  if (row >> extra) throw ParseError(line, "trailing token '" + extra + "'");
}

std::size_t read_count(LineReader& reader, const std::string& keyword) {
  auto row = reader.next(keyword.c_str());
  std::string word;
  long long count = -1;
  if (!(row >> word) || word != keyword || !(row >> count) || count < 0) {
    throw ParseError(reader.line(), "expected '" + keyword + " <count>'");
  }
  expect_done(row, reader.line());
  return static_cast<std::size_t>(count);
}

}  // namespace

TriMesh read_mesh(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path.string());
  LineReader reader(in);

  {
    auto row = reader.next("header");
    std::string magic;
    int version = 0;
    if (!(row >> magic >> version) || magic != "pcurlmesh" || version != 1) {
      throw ParseError(reader.line(), "expected header 'pcurlmesh 1'");
    }
    expect_done(row, reader.line());
  }

  const auto nv = read_count(reader, "vertices");
  std::vector<Vec2> vertices(nv);
  for (auto& v : vertices) {
    auto row = reader.next("vertex");
    if (!(row >> v.x >> v.y)) throw ParseError(reader.line(), "expected 'x y'");
    expect_done(row, reader.line());
  }

  const auto nt = read_count(reader, "triangles");
  std::vector<TriMesh::Triangle> triangles(nt);
  for (auto& t : triangles) {
    auto row = reader.next("triangle");
    if (!(row >> t[0] >> t[1] >> t[2])) throw ParseError(reader.line(), "expected 'v0 v1 v2'");
    expect_done(row, reader.line());
  }

  std::string rest;
  for (int line = reader.line() + 1; std::getline(in, rest); ++line) {
    if (rest.find_first_not_of(" \t\r") != std::string::npos) {
      throw ParseError(line, "unexpected content after triangle block");
    }
  }
  return TriMesh(std::move(vertices), std::move(triangles));
}

}  // namespace pcurl
