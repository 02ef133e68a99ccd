#include "pcurl/stepper.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace pcurl {

void StepperConfig::validate() const {
  if (!(dt > 0.0)) throw InvalidArgument("dt must be > 0");
  if (!(t_end >= dt * (1.0 - 1e-12))) throw InvalidArgument("dt must not exceed t_end");
  if (!(newton_rel_tol > 0.0) || !(newton_abs_tol > 0.0)) {
    throw InvalidArgument("Newton tolerances must be positive");
  }
  if (newton_max_iter < 1) throw InvalidArgument("newton_max_iter must be >= 1");
  if (!(line_search_shrink > 0.0 && line_search_shrink < 1.0)) {
    throw InvalidArgument("line_search_shrink must lie in (0, 1)");
  }
  if (line_search_max < 0) throw InvalidArgument("line_search_max must be >= 0");
}

long StepperConfig::num_steps() const { return std::lround(t_end / dt); }

namespace {

std::string describe_failure(long step, int iterations, double residual, const std::string& why) {
  std::ostringstream os;
  os << "Newton did not converge at step " << step << " after " << iterations
     << " iterations (residual " << residual << "): " << why;
  return os.str();
}

}  // namespace

NonConvergence::NonConvergence(long step_index, int iterations, double residual_norm,
                               const std::string& why)
    : Error(describe_failure(step_index, iterations, residual_norm, why)),
      step_index_(step_index),
      iterations_(iterations),
      residual_norm_(residual_norm) {}

TimeHistory TimeHistory::prefix(std::size_t last_step) const {
  if (last_step >= snapshots.size()) throw ContractViolation("prefix beyond end of history");
  TimeHistory out;
  out.dt = dt;
  out.first_step = first_step;
  out.homogeneous = homogeneous;
  out.times.assign(times.begin(), times.begin() + last_step + 1);
  out.snapshots.assign(snapshots.begin(), snapshots.begin() + last_step + 1);
  out.steps.assign(steps.begin(), steps.begin() + last_step);
  out.energy.assign(energy.begin(), energy.begin() + last_step + 1);
  return out;
}

Stepper::Stepper(const TriMesh& mesh, PowerLawParams params, StepperConfig config, Exec exec)
    : mesh_(&mesh), params_(params), config_(config), assembler_(mesh, exec) {
  params_.validate();
  config_.validate();
  const auto boundary = mesh.boundary_edges();
  constrained_.assign(boundary.begin(), boundary.end());
}

Eigen::VectorXd Stepper::boundary_values(const ProblemData& problem, double time) const {
  Eigen::VectorXd g = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(mesh_->num_edges()));
  if (problem.homogeneous) return g;
  const VectorField at_time = [&](Vec2 x) { return problem.boundary(x, time); };
  for (auto e : constrained_) g[e] = edge_dof(*mesh_, e, at_time);
  return g;
}

void Stepper::newton(EdgeField& u, const EdgeField& u_old, const Eigen::VectorXd& load,
                     const Eigen::VectorXd& g, const PowerLawParams& params, long step_index,
                     StepStats& stats) {
  const double dt = config_.dt;
  Eigen::VectorXd r = assembler_.residual(u, u_old, dt, load, params, constrained_, g);
  double rnorm = r.norm();
  const double tol = std::max(config_.newton_abs_tol, config_.newton_rel_tol * rnorm);
  stats.residual_history.push_back(rnorm);

  int iter = 0;
  while (rnorm > tol) {
    if (iter == config_.newton_max_iter) {
      throw NonConvergence(step_index, stats.iterations + iter, rnorm, "iteration limit reached");
    }
    const auto jac = assembler_.jacobian(u, dt, params, constrained_);
    if (!analyzed_) {
      solver_.analyzePattern(jac);
      analyzed_ = true;
    }
    solver_.factorize(jac);
    if (solver_.info() != Eigen::Success) {
      throw NonConvergence(step_index, stats.iterations + iter, rnorm, "Jacobian factorization failed");
    }
    const Eigen::VectorXd delta = solver_.solve(-r);

    double lambda = 1.0;
    bool accepted = false;
    EdgeField trial = u;
    for (int ls = 0; ls <= config_.line_search_max; ++ls) {
      trial.dofs() = u.dofs() + lambda * delta;
      Eigen::VectorXd rt = assembler_.residual(trial, u_old, dt, load, params, constrained_, g);
      const double rtn = rt.norm();
      if (rtn < rnorm) {
        u = std::move(trial);
        r = std::move(rt);
        rnorm = rtn;
        accepted = true;
        break;
      }
      lambda *= config_.line_search_shrink;
    }
    ++iter;
    if (!accepted) {
      throw NonConvergence(step_index, stats.iterations + iter, rnorm, "line search found no decrease");
    }
    stats.residual_history.push_back(rnorm);
  }
  stats.iterations += iter;
}

EdgeField Stepper::step(const EdgeField& u_old, long new_index, const ProblemData& problem,
                        StepStats* stats, EnergyEntry* energy) {
  if (&u_old.mesh() != mesh_) throw ContractViolation("field does not live on the stepper's mesh");
  const double t_new = time_of(new_index);
  const Eigen::VectorXd g = boundary_values(problem, t_new);
  const Eigen::VectorXd load = assembler_.load(problem.forcing, t_new);

  EdgeField u = u_old;
  u.set_time(t_new);
  for (auto e : constrained_) u.dofs()[e] = g[e];

  StepStats local;
  StepStats& st = stats ? *stats : local;
  st = StepStats{};

  if (config_.p_continuation && params_.p > 2.0) {
    // Roughly doubling exponents from 2 up to the target.
    const int stages = std::max(1, static_cast<int>(std::ceil(std::log2(params_.p / 2.0))));
    for (int k = 0; k <= stages; ++k) {
      PowerLawParams stage = params_;
      stage.p = k == stages ? params_.p : 2.0 * std::pow(params_.p / 2.0, double(k) / stages);
      newton(u, u_old, load, g, stage, new_index, st);
    }
  } else {
    newton(u, u_old, load, g, params_, new_index, st);
  }

  if (energy) {
    energy->l2_sq = u.dofs().dot(assembler_.mass() * u.dofs());
    energy->curl_lp_power = curl_lp_power(u, params_.p, assembler_.exec());
    energy->forcing_pairing = load.dot(u.dofs());
  }
  return u;
}

TimeHistory Stepper::run(const EdgeField& initial, const ProblemData& problem, long first_step) {
  if (&initial.mesh() != mesh_) throw ContractViolation("field does not live on the stepper's mesh");
  const long last = config_.num_steps();
  if (first_step < 0 || first_step > last) throw ContractViolation("first step outside the time grid");

  TimeHistory history;
  history.dt = config_.dt;
  history.first_step = first_step;
  history.homogeneous = problem.homogeneous;

  EdgeField u = initial;
  u.set_time(time_of(first_step));
  history.times.push_back(u.time());
  history.snapshots.push_back(u);
  history.energy.push_back({u.dofs().dot(assembler_.mass() * u.dofs()),
                            curl_lp_power(u, params_.p, assembler_.exec()), 0.0});

  for (long n = first_step + 1; n <= last; ++n) {
    StepStats stats;
    EnergyEntry entry;
    u = step(u, n, problem, &stats, &entry);
    history.times.push_back(u.time());
    history.snapshots.push_back(u);
    history.steps.push_back(std::move(stats));
    history.energy.push_back(entry);
  }
  return history;
}

EnergyReport energy_check(const TimeHistory& history, const PowerLawParams& params) {
  if (!history.homogeneous) {
    throw ContractViolation("energy_check needs a run with homogeneous boundary data");
  }
  EnergyReport report;
  report.worst_relative_margin = std::numeric_limits<double>::infinity();
  const double dt = history.dt;
  for (std::size_t n = 1; n < history.energy.size(); ++n) {
    const auto& prev = history.energy[n - 1];
    const auto& cur = history.energy[n];
    EnergyStepCheck c;
    c.step = history.first_step + static_cast<long>(n);
    const double dissipation = 2.0 * dt * params.alpha * cur.curl_lp_power;
    const double work = 2.0 * dt * cur.forcing_pairing;
    c.lhs = cur.l2_sq + dissipation;
    c.rhs = prev.l2_sq + work;
    c.margin = c.rhs - c.lhs;
    const double scale = std::max({prev.l2_sq, cur.l2_sq, dissipation, std::abs(work)});
    c.tolerance = 1e-8 * scale;
    c.holds = c.margin >= -c.tolerance;
    report.all_hold = report.all_hold && c.holds;
    report.total_margin += c.margin;
    if (scale > 0.0) report.worst_relative_margin = std::min(report.worst_relative_margin, c.margin / scale);
    report.steps.push_back(c);
  }
  if (report.steps.empty() || !std::isfinite(report.worst_relative_margin)) report.worst_relative_margin = 0.0;
  return report;
}

}  // namespace pcurl
