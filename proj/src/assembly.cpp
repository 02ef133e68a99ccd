#include "pcurl/assembly.hpp"

#include <algorithm>
#include <cmath>

#include "pcurl/error.hpp"
#include "pcurl/quadrature.hpp"

namespace pcurl {

void PowerLawParams::validate() const {
  if (!(p >= 2.0)) throw InvalidArgument("power-law exponent p must be >= 2");
  if (!(alpha > 0.0)) throw InvalidArgument("material constant alpha must be > 0");
  if (!(eps_reg >= 0.0)) throw InvalidArgument("eps_reg must be >= 0");
}

double rho(double s, const PowerLawParams& params) {
  if (params.p == 2.0) return params.alpha;
  return params.alpha * std::pow(std::abs(s), params.p - 2.0);
}

double flux(double s, const PowerLawParams& params) { return rho(s, params) * s; }

double flux_derivative(double s, const PowerLawParams& params) {
  if (params.p == 2.0) return params.alpha;
  const double m = std::max(std::abs(s), params.eps_reg);
  return params.alpha * (params.p - 1.0) * std::pow(m, params.p - 2.0);
}

Assembler::Assembler(const TriMesh& mesh, Exec exec) : mesh_(&mesh), exec_(exec) {
  const auto nt = mesh.num_triangles();
  geometry_.resize(nt);
  for_each_index(exec_, nt, [&](std::size_t t) { geometry_[t] = element_geometry(mesh, t); });

  const auto& rule = triangle_rule_degree5();
  std::vector<std::array<double, 9>> local(nt);
  for_each_index(exec_, nt, [&](std::size_t t) {
    const auto& geo = geometry_[t];
    local[t].fill(0.0);
    for (std::size_t g = 0; g < rule.points.size(); ++g) {
      const auto basis = basis_eval(geo, rule.points[g]);
      const double w = 2.0 * geo.area * rule.weights[g];
      for (int i = 0; i < 3; ++i) {
        for (int j = 0; j < 3; ++j) local[t][3 * i + j] += w * dot(basis.values[i], basis.values[j]);
      }
    }
  });

  std::vector<Eigen::Triplet<double>> triplets;
  triplets.reserve(9 * nt);
  for (std::size_t t = 0; t < nt; ++t) {
    const auto& refs = mesh.tri_edge(t);
    for (int i = 0; i < 3; ++i) {
      for (int j = 0; j < 3; ++j) triplets.emplace_back(refs[i].edge, refs[j].edge, local[t][3 * i + j]);
    }
  }
  const auto n = static_cast<Eigen::Index>(mesh.num_edges());
  mass_.resize(n, n);
  mass_.setFromTriplets(triplets.begin(), triplets.end());
  mass_.makeCompressed();

  slots_.resize(nt);
  const auto* outer = mass_.outerIndexPtr();
  const auto* inner = mass_.innerIndexPtr();
  for (std::size_t t = 0; t < nt; ++t) {
    const auto& refs = mesh.tri_edge(t);
    for (int i = 0; i < 3; ++i) {
      for (int j = 0; j < 3; ++j) {
        // Column-major: outer = column j, inner = row i.
        const auto col = refs[j].edge;
        const auto row = refs[i].edge;
        const auto* begin = inner + outer[col];
        const auto* end = inner + outer[col + 1];
        slots_[t][3 * i + j] = std::lower_bound(begin, end, row) - inner;
      }
    }
  }
}

void Assembler::check_field(const EdgeField& u) const {
  if (&u.mesh() != mesh_) throw ContractViolation("field does not live on the assembler's mesh");
}

Eigen::SparseMatrix<double> Assembler::curl_stiffness() const {
  Eigen::SparseMatrix<double> k = mass_;
  std::fill(k.valuePtr(), k.valuePtr() + k.nonZeros(), 0.0);
  for (std::size_t t = 0; t < geometry_.size(); ++t) {
    const auto& geo = geometry_[t];
    for (int i = 0; i < 3; ++i) {
      for (int j = 0; j < 3; ++j) k.valuePtr()[slots_[t][3 * i + j]] += geo.area * geo.curls[i] * geo.curls[j];
    }
  }
  return k;
}

Eigen::VectorXd Assembler::load(const TimeVectorField& f, double time) const {
  const auto& rule = triangle_rule_degree5();
  const auto nt = geometry_.size();
  std::vector<std::array<double, 3>> local(nt);
  for_each_index(exec_, nt, [&](std::size_t t) {
    const auto& geo = geometry_[t];
    local[t].fill(0.0);
    for (std::size_t g = 0; g < rule.points.size(); ++g) {
      const auto basis = basis_eval(geo, rule.points[g]);
      const Vec2 fx = f(mesh_->point(t, rule.points[g]), time);
      const double w = 2.0 * geo.area * rule.weights[g];
      for (int k = 0; k < 3; ++k) local[t][k] += w * dot(fx, basis.values[k]);
    }
  });
  Eigen::VectorXd out = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(size()));
  for (std::size_t t = 0; t < nt; ++t) {
    const auto& refs = mesh_->tri_edge(t);
    for (int k = 0; k < 3; ++k) out[refs[k].edge] += local[t][k];
  }
  return out;
}

Eigen::VectorXd Assembler::nonlinear_term(const EdgeField& u, const PowerLawParams& params) const {
  check_field(u);
  const auto nt = geometry_.size();
  std::vector<std::array<double, 3>> local(nt);
  for_each_index(exec_, nt, [&](std::size_t t) {
    const auto& geo = geometry_[t];
    const auto c = u.local_dofs(t);
    const double curl = c[0] * geo.curls[0] + c[1] * geo.curls[1] + c[2] * geo.curls[2];
    const double scaled = geo.area * flux(curl, params);
    for (int k = 0; k < 3; ++k) local[t][k] = scaled * geo.curls[k];
  });
  Eigen::VectorXd out = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(size()));
  for (std::size_t t = 0; t < nt; ++t) {
    const auto& refs = mesh_->tri_edge(t);
    for (int k = 0; k < 3; ++k) out[refs[k].edge] += local[t][k];
  }
  return out;
}

Eigen::VectorXd Assembler::residual(const EdgeField& u_new, const EdgeField& u_old, double dt,
                                    const Eigen::VectorXd& load, const PowerLawParams& params,
                                    std::span<const std::int32_t> constrained,
                                    const Eigen::VectorXd& boundary_values) const {
  check_field(u_new);
  require_same_mesh(u_new, u_old);
  if (!(dt > 0.0)) throw ContractViolation("time step must be positive");
  if (load.size() != static_cast<Eigen::Index>(size())) throw ContractViolation("load vector size mismatch");
  if (!constrained.empty() && boundary_values.size() != static_cast<Eigen::Index>(size())) {
    throw ContractViolation("boundary value vector size mismatch");
  }
  Eigen::VectorXd r = (mass_ * (u_new.dofs() - u_old.dofs())) / dt;
  r += nonlinear_term(u_new, params);
  r -= load;
  for (auto i : constrained) r[i] = u_new.dofs()[i] - boundary_values[i];
  return r;
}

Eigen::SparseMatrix<double> Assembler::jacobian(const EdgeField& u_new, double dt,
                                                const PowerLawParams& params,
                                                std::span<const std::int32_t> constrained) const {
  check_field(u_new);
  if (!(dt > 0.0)) throw ContractViolation("time step must be positive");
  Eigen::SparseMatrix<double> jac = mass_ / dt;

  const auto nt = geometry_.size();
  std::vector<double> scale(nt);
  for_each_index(exec_, nt, [&](std::size_t t) {
    const auto& geo = geometry_[t];
    const auto c = u_new.local_dofs(t);
    const double curl = c[0] * geo.curls[0] + c[1] * geo.curls[1] + c[2] * geo.curls[2];
    scale[t] = geo.area * flux_derivative(curl, params);
  });
  double* values = jac.valuePtr();
  for (std::size_t t = 0; t < nt; ++t) {
    const auto& geo = geometry_[t];
    for (int i = 0; i < 3; ++i) {
      for (int j = 0; j < 3; ++j) values[slots_[t][3 * i + j]] += scale[t] * geo.curls[i] * geo.curls[j];
    }
  }

  if (!constrained.empty()) {
    std::vector<std::uint8_t> fixed(size(), 0);
    for (auto i : constrained) fixed[i] = 1;
    for (Eigen::Index col = 0; col < jac.outerSize(); ++col) {
      for (Eigen::SparseMatrix<double>::InnerIterator it(jac, col); it; ++it) {
        if (fixed[it.row()] || fixed[col]) it.valueRef() = it.row() == col ? 1.0 : 0.0;
      }
    }
  }
  return jac;
}

}  // namespace pcurl
