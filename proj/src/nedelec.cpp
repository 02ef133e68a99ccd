#include "pcurl/nedelec.hpp"

#include <cmath>

#include "pcurl/error.hpp"
#include "pcurl/quadrature.hpp"

namespace pcurl {

ElementGeometry element_geometry(const TriMesh& mesh, std::size_t tri) {
  const auto& v = mesh.triangle(tri);
  const auto& refs = mesh.tri_edge(tri);
  ElementGeometry geo;
  geo.area = mesh.area(tri);
  const double inv2a = 1.0 / (2.0 * geo.area);
  for (int i = 0; i < 3; ++i) {
    const Vec2 d = mesh.vertex(v[(i + 2) % 3]) - mesh.vertex(v[(i + 1) % 3]);
    geo.grad_lambda[i] = {-d.y * inv2a, d.x * inv2a};
  }
  for (int k = 0; k < 3; ++k) {
    geo.signs[k] = refs[k].sign;
    geo.curls[k] = geo.signs[k] * 2.0 * cross(geo.grad_lambda[k], geo.grad_lambda[(k + 1) % 3]);
  }
  return geo;
}

LocalBasis basis_eval(const ElementGeometry& geo, const Bary& point) {
  LocalBasis out;
  for (int k = 0; k < 3; ++k) {
    const int i = k;
    const int j = (k + 1) % 3;
    out.values[k] =
        geo.signs[k] * (point[i] * geo.grad_lambda[j] - point[j] * geo.grad_lambda[i]);
    out.curls[k] = geo.curls[k];
  }
  return out;
}

LocalBasis basis_eval(const TriMesh& mesh, std::size_t tri, const Bary& point) {
  return basis_eval(element_geometry(mesh, tri), point);
}

std::array<double, 3> basis_divergence(const ElementGeometry& geo) {
  std::array<double, 3> out{};
  for (int k = 0; k < 3; ++k) {
    const Vec2 gi = geo.grad_lambda[k];
    const Vec2 gj = geo.grad_lambda[(k + 1) % 3];
    out[k] = geo.signs[k] * (dot(gi, gj) - dot(gj, gi));
  }
  return out;
}

EdgeField::EdgeField(const TriMesh& mesh, double time)
    : mesh_(&mesh), dofs_(Eigen::VectorXd::Zero(static_cast<Eigen::Index>(mesh.num_edges()))),
      time_(time) {}

EdgeField::EdgeField(const TriMesh& mesh, Eigen::VectorXd dofs, double time)
    : mesh_(&mesh), dofs_(std::move(dofs)), time_(time) {
  if (dofs_.size() != static_cast<Eigen::Index>(mesh.num_edges())) {
    throw ContractViolation("EdgeField: dof count " + std::to_string(dofs_.size()) +
                            " != edge count " + std::to_string(mesh.num_edges()));
  }
}

std::array<double, 3> EdgeField::local_dofs(std::size_t t) const {
  const auto& refs = mesh_->tri_edge(t);
  return {dofs_[refs[0].edge], dofs_[refs[1].edge], dofs_[refs[2].edge]};
}

void require_same_mesh(const EdgeField& a, const EdgeField& b) {
  if (!a.same_mesh(b)) throw ContractViolation("fields live on different meshes");
}

FieldValue eval_field(const EdgeField& field, std::size_t tri, const Bary& point) {
  const auto basis = basis_eval(field.mesh(), tri, point);
  const auto c = field.local_dofs(tri);
  FieldValue out;
  for (int k = 0; k < 3; ++k) {
    out.value += c[k] * basis.values[k];
    out.curl += c[k] * basis.curls[k];
  }
  return out;
}

double field_curl(const EdgeField& field, std::size_t tri) {
  const auto geo = element_geometry(field.mesh(), tri);
  const auto c = field.local_dofs(tri);
  return c[0] * geo.curls[0] + c[1] * geo.curls[1] + c[2] * geo.curls[2];
}

std::vector<double> field_curls(const EdgeField& field, Exec exec) {
  std::vector<double> out(field.mesh().num_triangles());
  for_each_index(exec, out.size(), [&](std::size_t t) { out[t] = field_curl(field, t); });
  return out;
}

double edge_dof(const TriMesh& mesh, std::size_t e, const VectorField& exact) {
  const auto& line = gauss_line4();
  const auto& ed = mesh.edge(e);
  const Vec2 a = mesh.vertex(ed[0]);
  const Vec2 tangent = mesh.vertex(ed[1]) - a;
  double sum = 0.0;
  for (std::size_t g = 0; g < line.points.size(); ++g) {
    sum += line.weights[g] * dot(exact(a + line.points[g] * tangent), tangent);
  }
  return sum;
}

EdgeField interpolate(const TriMesh& mesh, const VectorField& exact, double time) {
  EdgeField out(mesh, time);
  for (std::size_t e = 0; e < mesh.num_edges(); ++e) out.dofs()[e] = edge_dof(mesh, e, exact);
  return out;
}

ConstrainedField apply_homogeneous_bc(EdgeField field) {
  const auto boundary = field.mesh().boundary_edges();
  for (auto e : boundary) field.dofs()[e] = 0.0;
  return {std::move(field), std::vector<std::int32_t>(boundary.begin(), boundary.end())};
}

namespace {

// Integral over triangle t of integrand(x, u_h(x), curl) by the degree-5 rule.
template <class Integrand>
double integrate_on(const EdgeField& field, std::size_t t, Integrand&& integrand) {
  const auto& rule = triangle_rule_degree5();
  const auto& mesh = field.mesh();
  const auto geo = element_geometry(mesh, t);
  const auto c = field.local_dofs(t);
  double sum = 0.0;
  for (std::size_t g = 0; g < rule.points.size(); ++g) {
    const auto basis = basis_eval(geo, rule.points[g]);
    Vec2 value;
    for (int k = 0; k < 3; ++k) value += c[k] * basis.values[k];
    sum += rule.weights[g] * integrand(mesh.point(t, rule.points[g]), value);
  }
  return 2.0 * geo.area * sum;
}

}  // namespace

double l2_norm(const EdgeField& field, Exec exec) {
  const double sq = sum_over(exec, field.mesh().num_triangles(), [&](std::size_t t) {
    return integrate_on(field, t, [](Vec2, Vec2 u) { return dot(u, u); });
  });
  return std::sqrt(sq);
}

double curl_lp_power(const EdgeField& field, double p, Exec exec) {
  const auto& mesh = field.mesh();
  return sum_over(exec, mesh.num_triangles(), [&](std::size_t t) {
    return mesh.area(t) * std::pow(std::abs(field_curl(field, t)), p);
  });
}

double curl_lp_norm(const EdgeField& field, double p, Exec exec) {
  return std::pow(curl_lp_power(field, p, exec), 1.0 / p);
}

std::vector<double> local_l2_error_sq(const EdgeField& field, const VectorField& exact,
                                      Exec exec) {
  std::vector<double> out(field.mesh().num_triangles());
  for_each_index(exec, out.size(), [&](std::size_t t) {
    out[t] = integrate_on(field, t, [&](Vec2 x, Vec2 u) {
      const Vec2 e = exact(x) - u;
      return dot(e, e);
    });
  });
  return out;
}

double l2_error(const EdgeField& field, const VectorField& exact, Exec exec) {
  const double sq = sum_over(exec, field.mesh().num_triangles(), [&](std::size_t t) {
    return integrate_on(field, t, [&](Vec2 x, Vec2 u) {
      const Vec2 e = exact(x) - u;
      return dot(e, e);
    });
  });
  return std::sqrt(sq);
}

namespace {

double curl_error_on(const EdgeField& field, std::size_t t, const ScalarField& exact_curl,
                     double p) {
  const auto& rule = triangle_rule_degree5();
  const auto& mesh = field.mesh();
  const double ch = field_curl(field, t);
  double sum = 0.0;
  for (std::size_t g = 0; g < rule.points.size(); ++g) {
    sum += rule.weights[g] * std::pow(std::abs(exact_curl(mesh.point(t, rule.points[g])) - ch), p);
  }
  return 2.0 * mesh.area(t) * sum;
}

}  // namespace

std::vector<double> local_curl_error_power(const EdgeField& field, const ScalarField& exact_curl,
                                           double p, Exec exec) {
  std::vector<double> out(field.mesh().num_triangles());
  for_each_index(exec, out.size(),
                 [&](std::size_t t) { out[t] = curl_error_on(field, t, exact_curl, p); });
  return out;
}

double curl_lp_error_power(const EdgeField& field, const ScalarField& exact_curl, double p,
                           Exec exec) {
  return sum_over(exec, field.mesh().num_triangles(),
                  [&](std::size_t t) { return curl_error_on(field, t, exact_curl, p); });
}

double lp_power(const TriMesh& mesh, const ScalarField& f, double p, Exec exec) {
  const auto& rule = triangle_rule_degree5();
  return sum_over(exec, mesh.num_triangles(), [&](std::size_t t) {
    double sum = 0.0;
    for (std::size_t g = 0; g < rule.points.size(); ++g) {
      sum += rule.weights[g] * std::pow(std::abs(f(mesh.point(t, rule.points[g]))), p);
    }
    return 2.0 * mesh.area(t) * sum;
  });
}

FieldNorms norms(const EdgeField& field, double p, const VectorField& exact,
                 const ScalarField& exact_curl, Exec exec) {
  FieldNorms out;
  out.l2 = l2_norm(field, exec);
  out.curl_lp = curl_lp_norm(field, p, exec);
  if (exact) out.l2_error = l2_error(field, exact, exec);
  if (exact_curl) out.curl_lp_error = std::pow(curl_lp_error_power(field, exact_curl, p, exec), 1.0 / p);
  return out;
}

}  // namespace pcurl
