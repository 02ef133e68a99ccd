#include "pcurl/estimators.hpp"

#include <algorithm>
#include <cmath>

#include "pcurl/quadrature.hpp"

namespace pcurl {

namespace {

double root_sum_squares(const std::vector<double>& v) {
  double sum = 0.0;
  for (double x : v) sum += x * x;
  return std::sqrt(sum);
}

EdgeField midpoint_field(const EdgeField& u_new, const EdgeField& u_old) {
  return EdgeField(u_new.mesh(), 0.5 * (u_new.dofs() + u_old.dofs()),
                   0.5 * (u_new.time() + u_old.time()));
}

// Barycentric coordinates in triangle t of the point at parameter s along
// global edge `local` (s = 0 at the lower vertex, s = 1 at the higher).
Bary edge_point(const EdgeRef& ref, int local, double s) {
  Bary b{0.0, 0.0, 0.0};
  const double at_start = ref.sign > 0 ? 1.0 - s : s;
  b[local] = at_start;
  b[(local + 1) % 3] = 1.0 - at_start;
  return b;
}

int local_index(const TriMesh& mesh, std::int32_t tri, std::int32_t edge) {
  const auto& refs = mesh.tri_edge(tri);
  for (int k = 0; k < 3; ++k) {
    if (refs[k].edge == edge) return k;
  }
  throw ContractViolation("edge not found in adjacent triangle");
}

}  // namespace

EstimatorBreakdown step_estimators(const EdgeField& u_new, const EdgeField& u_old, double dt,
                                   const TimeVectorField& forcing, double t_eval,
                                   const PowerLawParams& params, Exec exec) {
  require_same_mesh(u_new, u_old);
  if (!(dt > 0.0)) throw ContractViolation("time step must be positive");
  const auto& mesh = u_new.mesh();
  const EdgeField rate(mesh, (u_new.dofs() - u_old.dofs()) / dt, t_eval);
  const EdgeField mid = midpoint_field(u_new, u_old);
  const auto& rule = triangle_rule_degree5();
  const auto& line = gauss_line4();

  EstimatorBreakdown out;
  out.time = t_eval;
  const auto nt = mesh.num_triangles();
  out.eta_i.resize(nt);
  out.eta_d.resize(nt);
  std::vector<double> flux_mid(nt);

  for_each_index(exec, nt, [&](std::size_t t) {
    const auto geo = element_geometry(mesh, t);
    const auto c = rate.local_dofs(t);
    double sq = 0.0;
    for (std::size_t g = 0; g < rule.points.size(); ++g) {
      const auto basis = basis_eval(geo, rule.points[g]);
      Vec2 dudt;
      for (int k = 0; k < 3; ++k) dudt += c[k] * basis.values[k];
      // curl of the elementwise-constant flux is zero inside K.
      const Vec2 res = forcing(mesh.point(t, rule.points[g]), t_eval) - dudt;
      sq += rule.weights[g] * dot(res, res);
    }
    out.eta_i[t] = mesh.h_K(t) * std::sqrt(2.0 * geo.area * sq);

    const auto div = basis_divergence(geo);
    const double div_rate = c[0] * div[0] + c[1] * div[1] + c[2] * div[2];
    out.eta_d[t] = mesh.h_K(t) * std::sqrt(geo.area) * std::abs(div_rate);

    flux_mid[t] = flux(field_curl(mid, t), params);
  });

  const auto interior = mesh.interior_edges();
  out.eta_t.resize(interior.size());
  out.eta_n.resize(interior.size());
  for_each_index(exec, interior.size(), [&](std::size_t k) {
    const auto e = interior[k];
    const auto [t1, t2] = mesh.edge_triangles(e);
    const double hf = mesh.h_F(e);
    const Vec2 tangent = mesh.vertex(mesh.edge(e)[1]) - mesh.vertex(mesh.edge(e)[0]);
    const Vec2 normal{tangent.y / hf, -tangent.x / hf};

    // Tangential trace of psi z_hat has magnitude |psi|; the jump is constant.
    const double jump_t = flux_mid[t1] - flux_mid[t2];
    out.eta_t[k] = std::sqrt(hf) * std::abs(jump_t) * std::sqrt(hf);

    const int l1 = local_index(mesh, t1, e);
    const int l2 = local_index(mesh, t2, e);
    double sq = 0.0;
    for (std::size_t g = 0; g < line.points.size(); ++g) {
      const double s = line.points[g];
      const Vec2 v1 = eval_field(rate, t1, edge_point(mesh.tri_edge(t1)[l1], l1, s)).value;
      const Vec2 v2 = eval_field(rate, t2, edge_point(mesh.tri_edge(t2)[l2], l2, s)).value;
      const double jump_n = dot(v1 - v2, normal);
      sq += line.weights[g] * jump_n * jump_n;
    }
    out.eta_n[k] = std::sqrt(hf) * std::sqrt(hf * sq);
  });

  out.total_i = root_sum_squares(out.eta_i);
  out.total_d = root_sum_squares(out.eta_d);
  out.total_t = root_sum_squares(out.eta_t);
  out.total_n = root_sum_squares(out.eta_n);
  return out;
}

AccumulatedEstimate accumulate(const TimeHistory& history, const ManufacturedCase& c,
                               const PowerLawParams& params, Exec exec, std::size_t step_begin,
                               std::size_t step_end) {
  step_end = std::min(step_end, history.num_steps());
  if (step_begin > step_end) throw ContractViolation("empty or inverted step range");
  const double dt = history.dt;
  const double q = params.q();
  const auto problem = c.problem();

  AccumulatedEstimate acc;
  if (step_begin == 0) {
    const auto& u0 = history.snapshots.front();
    const double e0 = l2_error(u0, c.field_at(history.times.front()), exec);
    acc.initial_error_sq = e0 * e0;
  }
  for (std::size_t n = step_begin; n < step_end; ++n) {
    const auto& u_old = history.snapshots[n];
    const auto& u_new = history.snapshots[n + 1];
    const double t_mid = 0.5 * (history.times[n] + history.times[n + 1]);
    auto est = step_estimators(u_new, u_old, dt, problem.forcing, t_mid, params, exec);
    const double ci = dt * std::pow(est.total_i, q);
    const double ct = dt * std::pow(est.total_t, q);
    const double cn = dt * est.total_n * est.total_n;
    const double cd = dt * est.total_d * est.total_d;
    acc.int_eta_i_q += ci;
    acc.int_eta_t_q += ct;
    acc.int_eta_n_sq += cn;
    acc.int_eta_d_sq += cd;
    acc.contributions.push_back(ci + ct + cn + cd);
    acc.breakdowns.push_back(std::move(est));
  }
  return acc;
}

ErrorSummary error_summary(const TimeHistory& history, const ManufacturedCase& c,
                           const PowerLawParams& params, Exec exec) {
  ErrorSummary out;
  const double p = params.p;
  const double dt = history.dt;
  for (std::size_t n = 0; n < history.snapshots.size(); ++n) {
    const double t = history.times[n];
    const double e = l2_error(history.snapshots[n], c.field_at(t), exec);
    out.l2_error_sq.push_back(e * e);
    out.sup_l2_error_sq = std::max(out.sup_l2_error_sq, e * e);
    const EdgeField zero(history.mesh());
    const double ue = l2_error(zero, c.field_at(t), exec);
    out.sup_l2_exact_sq = std::max(out.sup_l2_exact_sq, ue * ue);
  }
  for (std::size_t n = 0; n + 1 < history.snapshots.size(); ++n) {
    const double t_mid = 0.5 * (history.times[n] + history.times[n + 1]);
    const EdgeField mid = midpoint_field(history.snapshots[n + 1], history.snapshots[n]);
    const double ce = curl_lp_error_power(mid, c.curl_at(t_mid), p, exec);
    out.curl_error_p.push_back(ce);
    out.int_curl_error_p += dt * ce;
    out.int_curl_exact_p += dt * lp_power(history.mesh(), c.curl_at(t_mid), p, exec);
  }
  return out;
}

Effectivity effectivity_kappa(const AccumulatedEstimate& estimate, const ErrorSummary& errors) {
  Effectivity out;
  out.numerator = estimate.int_eta_i_q + estimate.int_eta_t_q + estimate.int_eta_n_sq;
  out.denominator = errors.total();
  const double reference = errors.sup_l2_exact_sq + errors.int_curl_exact_p;
  if (!(out.denominator > 1e-24 * reference) || out.denominator == 0.0) {
    throw ZeroErrorDenominator("error is at rounding level; effectivity undefined");
  }
  out.kappa = out.numerator / out.denominator;
  return out;
}

Effectivity effectivity_kappa(const TimeHistory& history, const ManufacturedCase& c,
                              const PowerLawParams& params, Exec exec) {
  const auto errors = error_summary(history, c, params, exec);
  const auto estimate = accumulate(history, c, params, exec);
  return effectivity_kappa(estimate, errors);
}

double ac_loss_discrete(const TimeHistory& history, const PowerLawParams& params, Exec exec) {
  const double horizon = history.times.back() - history.times.front();
  if (!(horizon > 0.0)) return 0.0;
  double sum = 0.0;
  for (std::size_t n = 0; n + 1 < history.snapshots.size(); ++n) {
    const EdgeField mid = midpoint_field(history.snapshots[n + 1], history.snapshots[n]);
    sum += history.dt * curl_lp_power(mid, params.p, exec);
  }
  return sum / horizon;
}

double power_difference_bound(double horizon, double p, double bound_m, double integral) {
  return p * std::pow(horizon, 1.0 - 1.0 / p) * std::pow(bound_m, p - 1.0) * std::pow(integral, 1.0 / p);
}

AcLossReport ac_loss_report(const TimeHistory& history, const ManufacturedCase& c,
                            const PowerLawParams& params, const AccumulatedEstimate& estimate,
                            const ErrorSummary& errors, double q_exact, Exec exec) {
  AcLossReport out;
  const double p = params.p;
  const double t0 = history.times.front();
  const double horizon = history.times.back() - t0;
  out.q_exact = q_exact >= 0.0 ? q_exact : ac_loss_exact(c, history.times.back());
  out.q_discrete = ac_loss_discrete(history, params, exec);
  out.delta = std::abs(out.q_exact - out.q_discrete);

  double m = 0.0;
  for (std::size_t n = 0; n < history.snapshots.size(); ++n) {
    m = std::max(m, curl_lp_norm(history.snapshots[n], p, exec));
    m = std::max(m, std::pow(exact_curl_lp_power_disk(c, history.times[n]), 1.0 / p));
    if (n + 1 < history.snapshots.size()) {
      const double t_mid = 0.5 * (history.times[n] + history.times[n + 1]);
      const EdgeField mid = midpoint_field(history.snapshots[n + 1], history.snapshots[n]);
      m = std::max(m, curl_lp_norm(mid, p, exec));
      m = std::max(m, std::pow(exact_curl_lp_power_disk(c, t_mid), 1.0 / p));
    }
  }
  out.bound_m = m;
  out.int_curl_error_p = errors.int_curl_error_p;
  out.middle_bound = power_difference_bound(horizon, p, m, errors.int_curl_error_p);
  out.unscaled_bound = power_difference_bound(horizon, p, m, estimate.total());
  out.middle_holds = out.delta <= out.middle_bound;
  return out;
}

}  // namespace pcurl
