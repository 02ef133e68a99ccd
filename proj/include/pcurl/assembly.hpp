#pragma once

#include <Eigen/Sparse>
#include <functional>
#include <span>
#include <vector>

#include "pcurl/exec.hpp"
#include "pcurl/mesh.hpp"
#include "pcurl/nedelec.hpp"

namespace pcurl {

/// Power-law resistivity rho(s) = alpha |s|^(p-2). The conjugate exponent q
/// is derived from p, never stored.
struct PowerLawParams {
  double p = 2.0;
  double alpha = 1.0;
  /// Floor on |s| inside the flux derivative; keeps the Jacobian SPD at s = 0.
  double eps_reg = 1e-10;

  double q() const { return p / (p - 1.0); }
  /// Throws InvalidArgument unless p >= 2, alpha > 0, eps_reg >= 0.
  void validate() const;
};

double rho(double s, const PowerLawParams& params);
/// rho(s) * s.
double flux(double s, const PowerLawParams& params);
/// alpha (p-1) max(|s|, eps_reg)^(p-2).
double flux_derivative(double s, const PowerLawParams& params);

using TimeVectorField = std::function<Vec2(Vec2, double)>;

/// Assembled matrix (compressed sparse, symmetric, so row and column layouts
/// coincide) with its right-hand side and the eliminated index set.
struct SparseSystem {
  Eigen::SparseMatrix<double> matrix;
  Eigen::VectorXd rhs;
  std::vector<std::int32_t> constrained;
};

/// Discrete operators of the backward-Euler system on one mesh. The sparsity
/// pattern and mass matrix are built once in the constructor; element-local
/// contributions are computed under `exec` and scattered sequentially, so
/// both execution modes give identical bits.
class Assembler {
 public:
  explicit Assembler(const TriMesh& mesh, Exec exec = Exec::parallel);

  const TriMesh& mesh() const { return *mesh_; }
  Exec exec() const { return exec_; }
  std::size_t size() const { return mesh_->num_edges(); }

  const Eigen::SparseMatrix<double>& mass() const { return mass_; }
  /// sum_K |K| curl(phi_i) curl(phi_j): the p = 2, alpha = 1 stiffness.
  Eigen::SparseMatrix<double> curl_stiffness() const;

  /// (f(., time), phi_i) by the degree-5 rule.
  Eigen::VectorXd load(const TimeVectorField& f, double time) const;

  /// (flux(curl u), curl phi_i).
  Eigen::VectorXd nonlinear_term(const EdgeField& u, const PowerLawParams& params) const;

  /// M (u_new - u_old)/dt + K(u_new) - load. Entries in `constrained` are
  /// replaced by u_new_i - boundary_values_i. Throws ContractViolation if the
  /// fields live on different meshes.
  Eigen::VectorXd residual(const EdgeField& u_new, const EdgeField& u_old, double dt,
                           const Eigen::VectorXd& load, const PowerLawParams& params,
                           std::span<const std::int32_t> constrained = {},
                           const Eigen::VectorXd& boundary_values = {}) const;

  /// M/dt + K'(u_new) with constrained rows and columns reduced to identity.
  Eigen::SparseMatrix<double> jacobian(const EdgeField& u_new, double dt,
                                       const PowerLawParams& params,
                                       std::span<const std::int32_t> constrained = {}) const;

 private:
  void check_field(const EdgeField& u) const;

  const TriMesh* mesh_;
  Exec exec_;
  std::vector<ElementGeometry> geometry_;
  Eigen::SparseMatrix<double> mass_;
  // Position of local entry (i, j) of triangle t in the value array: slots_[t][3 i + j].
  std::vector<std::array<Eigen::Index, 9>> slots_;
};

}  // namespace pcurl
