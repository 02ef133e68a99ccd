#pragma once

// Lowest-order edge elements on triangles. The local function attached to
// local edge k = (i, j) is lambda_i grad(lambda_j) - lambda_j grad(lambda_i),
// times the orientation sign of that edge; its degree of freedom is the
// tangential line integral along the globally oriented edge.

#include <Eigen/Core>
#include <array>
#include <functional>
#include <span>
#include <vector>

#include "pcurl/exec.hpp"
#include "pcurl/mesh.hpp"

namespace pcurl {

using VectorField = std::function<Vec2(Vec2)>;
using ScalarField = std::function<double(Vec2)>;

/// Per-triangle constants of the affine map.
struct ElementGeometry {
  std::array<Vec2, 3> grad_lambda;
  std::array<double, 3> signs;
  /// Signed scalar curls of the three local basis functions.
  std::array<double, 3> curls;
  double area = 0.0;
};

ElementGeometry element_geometry(const TriMesh& mesh, std::size_t tri);

struct LocalBasis {
  std::array<Vec2, 3> values;
  std::array<double, 3> curls;
};

LocalBasis basis_eval(const TriMesh& mesh, std::size_t tri, const Bary& point);
LocalBasis basis_eval(const ElementGeometry& geo, const Bary& point);

/// Pointwise divergence of the three local functions: grad(li).grad(lj)
/// minus grad(lj).grad(li), which is exactly zero.
std::array<double, 3> basis_divergence(const ElementGeometry& geo);

/// Coefficients over global edges; one time level of a discrete field.
class EdgeField {
 public:
  explicit EdgeField(const TriMesh& mesh, double time = 0.0);
  EdgeField(const TriMesh& mesh, Eigen::VectorXd dofs, double time = 0.0);

  const TriMesh& mesh() const { return *mesh_; }
  const Eigen::VectorXd& dofs() const { return dofs_; }
  Eigen::VectorXd& dofs() { return dofs_; }
  double time() const { return time_; }
  void set_time(double t) { time_ = t; }

  /// Coefficients of triangle t's three local functions.
  std::array<double, 3> local_dofs(std::size_t t) const;

  bool same_mesh(const EdgeField& other) const { return mesh_ == other.mesh_; }

 private:
  const TriMesh* mesh_;
  Eigen::VectorXd dofs_;
  double time_;
};

/// Throws ContractViolation unless both fields live on the same mesh.
void require_same_mesh(const EdgeField& a, const EdgeField& b);

struct FieldValue {
  Vec2 value;
  double curl = 0.0;
};

FieldValue eval_field(const EdgeField& field, std::size_t tri, const Bary& point);
/// Scalar curl on triangle t (constant there).
double field_curl(const EdgeField& field, std::size_t tri);
/// Elementwise curls for every triangle.
std::vector<double> field_curls(const EdgeField& field, Exec exec = Exec::parallel);

/// Tangential line integral of `exact` along edge e (4-point Gauss).
double edge_dof(const TriMesh& mesh, std::size_t e, const VectorField& exact);
EdgeField interpolate(const TriMesh& mesh, const VectorField& exact, double time = 0.0);

struct ConstrainedField {
  EdgeField field;
  std::vector<std::int32_t> constrained;
};

/// Zeros the boundary dofs and reports them as the constrained index set.
ConstrainedField apply_homogeneous_bc(EdgeField field);

// Norms, all by the 7-point degree-5 rule elementwise.
double l2_norm(const EdgeField& field, Exec exec = Exec::parallel);
/// integral of |curl u_h|^p.
double curl_lp_power(const EdgeField& field, double p, Exec exec = Exec::parallel);
double curl_lp_norm(const EdgeField& field, double p, Exec exec = Exec::parallel);
double l2_error(const EdgeField& field, const VectorField& exact, Exec exec = Exec::parallel);
/// integral of |curl u_h - exact_curl|^p.
double curl_lp_error_power(const EdgeField& field, const ScalarField& exact_curl, double p,
                           Exec exec = Exec::parallel);
/// integral of |exact_curl|^p over the mesh.
double lp_power(const TriMesh& mesh, const ScalarField& f, double p, Exec exec = Exec::parallel);

/// Per-triangle squared L2 error and p-th power of the curl error.
std::vector<double> local_l2_error_sq(const EdgeField& field, const VectorField& exact,
                                      Exec exec = Exec::parallel);
std::vector<double> local_curl_error_power(const EdgeField& field, const ScalarField& exact_curl,
                                           double p, Exec exec = Exec::parallel);

struct FieldNorms {
  double l2 = 0.0;
  double curl_lp = 0.0;
  double l2_error = 0.0;
  double curl_lp_error = 0.0;
};

/// All four quantities at once; the error entries stay 0 without exact data.
FieldNorms norms(const EdgeField& field, double p, const VectorField& exact = {},
                 const ScalarField& exact_curl = {}, Exec exec = Exec::parallel);

}  // namespace pcurl
