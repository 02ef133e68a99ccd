#include "pcurl/cli/studies.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <sstream>

#include <json.hpp>

namespace pcurl::cli {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

// Human-readable number for gate details; the CSV/JSON values keep full precision.
std::string describe(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

bool exactly_representable(const RadialPair& pair) { return pair.a == 1.0 && pair.b == 1.0; }

GateResult slope_gate(const std::string& name, const Sweep& sweep, const std::string& metric, double lo,
                      double hi) {
  GateResult g;
  g.name = name;
  const auto it = sweep.slopes.find(metric);
  if (it == sweep.slopes.end()) {
    g.detail = "no slope (fewer than 3 positive values)";
    return g;
  }
  const double s = it->second.slope;
  g.passed = s >= lo && s <= hi;
  g.detail = "slope " + describe(s) + " in [" + describe(lo) + ", " + describe(hi) + "]";
  return g;
}

nlohmann::json slopes_json(const Sweep& sweep) {
  nlohmann::json out = nlohmann::json::object();
  for (const auto& [metric, fit] : sweep.slopes) {
    out[metric] = {{"slope", fit.slope}, {"intercept", fit.intercept}, {"residual", fit.residual},
                   {"points", fit.points}};
  }
  return out;
}

nlohmann::json gates_json(const std::vector<GateResult>& gates) {
  nlohmann::json out = nlohmann::json::array();
  for (const auto& g : gates) out.push_back({{"name", g.name}, {"passed", g.passed}, {"detail", g.detail}});
  return out;
}

bool all_passed(const std::vector<GateResult>& gates) {
  return std::all_of(gates.begin(), gates.end(), [](const GateResult& g) { return g.passed; });
}

nlohmann::json config_json(const ExperimentConfig& c) {
  return {{"study", to_string(c.study)}, {"family", c.family}, {"p", c.params.p}, {"alpha", c.params.alpha},
          {"levels", c.levels}, {"dt", c.dts}, {"t_end", c.t_end}, {"deterministic", c.deterministic}};
}

const std::vector<std::string> kCellColumns{
    "sweep",        "case",         "level",       "h",           "dt",          "t_end",
    "steps",        "l2_error",     "sup_l2_error_sq", "int_curl_error_p", "int_eta_i_q", "int_eta_t_q",
    "int_eta_n_sq", "int_eta_d_sq", "initial_error_sq", "kappa",   "reliability_ratio", "newton_max",
    "newton_mean",  "energy_holds"};

void add_cell(CsvTable& t, const std::string& sweep, const CellResult& r) {
  t.row().cell(sweep).cell(r.case_name).cell(r.level).cell(r.h).cell(r.dt).cell(r.t_end).cell(r.steps);
  t.cell(r.sup_l2_error).cell(r.sup_l2_error_sq).cell(r.int_curl_error_p);
  t.cell(r.int_eta_i_q).cell(r.int_eta_t_q).cell(r.int_eta_n_sq).cell(r.int_eta_d_sq).cell(r.initial_error_sq);
  if (r.kappa) {
    t.cell(*r.kappa);
  } else {
    t.blank();
  }
  const double rr = r.reliability_ratio();
  if (std::isfinite(rr)) {
    t.cell(rr);
  } else {
    t.blank();
  }
  t.cell(r.newton_max).cell(r.newton_mean);
  if (r.energy_holds) {
    t.cell(std::string(*r.energy_holds ? "true" : "false"));
  } else {
    t.blank();
  }
}

std::string sweep_file_stem(std::size_t index) { return "sweep" + std::to_string(index); }

}  // namespace

TimeHistory run_history(const TriMesh& mesh, const ManufacturedCase& c, const StepperConfig& solver,
                        BoundaryMode boundary, Exec exec) {
  EdgeField initial = interpolate(mesh, c.field_at(0.0), 0.0);
  if (boundary == BoundaryMode::homogeneous) initial = apply_homogeneous_bc(std::move(initial)).field;
  Stepper stepper(mesh, c.params(), solver, exec);
  return stepper.run(initial, c.problem(boundary));
}

double CellResult::reliability_ratio() const {
  const double est = initial_error_sq + int_eta_i_q + int_eta_t_q + int_eta_n_sq + int_eta_d_sq;
  if (!(est > 0.0)) return std::numeric_limits<double>::quiet_NaN();
  return (sup_l2_error_sq + int_curl_error_p) / est;
}

CellResult evaluate_history(const TimeHistory& history, const ManufacturedCase& c, int level,
                            bool with_estimators, Exec exec) {
  CellResult r;
  r.case_name = c.name();
  r.level = level;
  r.h = history.mesh().mesh_size();
  r.dt = history.dt;
  r.t_end = history.times.back();
  r.steps = static_cast<long>(history.num_steps());
  const auto& params = c.params();
  const auto errors = error_summary(history, c, params, exec);
  r.sup_l2_error_sq = errors.sup_l2_error_sq;
  r.sup_l2_error = std::sqrt(errors.sup_l2_error_sq);
  r.int_curl_error_p = errors.int_curl_error_p;
  if (with_estimators) {
    const auto est = accumulate(history, c, params, exec);
    r.int_eta_i_q = est.int_eta_i_q;
    r.int_eta_t_q = est.int_eta_t_q;
    r.int_eta_n_sq = est.int_eta_n_sq;
    r.int_eta_d_sq = est.int_eta_d_sq;
    r.initial_error_sq = est.initial_error_sq;
    try {
      r.kappa = effectivity_kappa(est, errors).kappa;
    } catch (const ZeroErrorDenominator&) {
      r.kappa.reset();
    }
  }
  long total = 0;
  for (const auto& s : history.steps) {
    r.newton_max = std::max(r.newton_max, s.iterations);
    total += s.iterations;
  }
  r.newton_mean = history.steps.empty() ? 0.0 : static_cast<double>(total) / history.steps.size();
  if (history.homogeneous) r.energy_holds = energy_check(history, params).all_hold;
  return r;
}

std::vector<double> Sweep::variable_values() const {
  std::vector<double> out;
  for (const auto& r : rows) out.push_back(variable == "h" ? r.h : variable == "dt" ? r.dt : r.t_end);
  return out;
}

std::vector<double> Sweep::column(const std::string& metric) const {
  std::vector<double> out;
  for (const auto& r : rows) {
    if (metric == "l2_error") {
      out.push_back(r.sup_l2_error);
    } else if (metric == "sup_l2_error_sq") {
      out.push_back(r.sup_l2_error_sq);
    } else if (metric == "int_curl_error_p") {
      out.push_back(r.int_curl_error_p);
    } else if (metric == "int_eta_i_q") {
      out.push_back(r.int_eta_i_q);
    } else if (metric == "int_eta_t_q") {
      out.push_back(r.int_eta_t_q);
    } else if (metric == "int_eta_n_sq") {
      out.push_back(r.int_eta_n_sq);
    } else if (metric == "kappa") {
      out.push_back(r.kappa.value_or(std::numeric_limits<double>::quiet_NaN()));
    } else if (metric == "reliability_ratio") {
      out.push_back(r.reliability_ratio());
    } else {
      throw ContractViolation("unknown metric " + metric);
    }
  }
  return out;
}

void Sweep::fit(const std::vector<std::string>& metrics) {
  const auto x = variable_values();
  for (const auto& m : metrics) {
    const auto y = column(m);
    if (const auto f = fit_loglog(x, y)) slopes[m] = *f;
  }
}

bool ConvergenceReport::gates_passed() const { return all_passed(gates); }
bool AcLossStudy::gates_passed() const { return all_passed(gates); }
bool SnapshotStudy::gates_passed() const { return all_passed(gates); }

ConvergenceReport cmd_verify(const ExperimentConfig& config, Exec exec) {
  ConvergenceReport report;
  report.study = config.study;
  const bool do_h = config.study != StudyKind::convergence_dt;
  const bool do_dt = config.study != StudyKind::convergence_h;
  const double dt_min = *std::min_element(config.dts.begin(), config.dts.end());
  const int level_max = *std::max_element(config.levels.begin(), config.levels.end());

  for (const auto& pair : config.pairs) {
    const auto c = config.make_radial(pair);
    auto run_cell = [&](int level, double dt) {
      const auto start = Clock::now();
      const TriMesh mesh = disk_mesh(level);
      const auto history = run_history(mesh, c, config.solver_for(dt, config.t_end), config.boundary, exec);
      auto cell = evaluate_history(history, c, level, true, exec);
      cell.wall_seconds = seconds_since(start);
      return cell;
    };
    if (do_h) {
      Sweep s;
      s.label = c.name() + " h-sweep";
      s.variable = "h";
      s.pair = pair;
      for (int level : config.levels) s.rows.push_back(run_cell(level, dt_min));
      std::sort(s.rows.begin(), s.rows.end(), [](const auto& a, const auto& b) { return a.h < b.h; });
      s.fit({"l2_error"});
      report.sweeps.push_back(std::move(s));
    }
    if (do_dt) {
      Sweep s;
      s.label = c.name() + " dt-sweep";
      s.variable = "dt";
      s.pair = pair;
      for (double dt : config.dts) s.rows.push_back(run_cell(level_max, dt));
      std::sort(s.rows.begin(), s.rows.end(), [](const auto& a, const auto& b) { return a.dt < b.dt; });
      s.fit({"l2_error"});
      report.sweeps.push_back(std::move(s));
    }
  }

  for (const auto& s : report.sweeps) {
    if (exactly_representable(s.pair)) {
      GateResult g;
      g.name = s.label + ": exactness";
      double worst = 0.0;
      for (const auto& r : s.rows) worst = std::max(worst, r.sup_l2_error);
      g.passed = worst <= config.exact_tol;
      g.detail = "max L2 error " + describe(worst) + " <= " + describe(config.exact_tol);
      report.gates.push_back(g);
      continue;
    }
    const bool mixed = s.pair.a != 1.0 && s.pair.b != 1.0;
    const double lo = mixed ? config.mixed_slope_min : config.slope_min;
    const double hi = mixed ? config.mixed_slope_max : config.slope_max;
    // A sweep is gated only when that variable carries discretization error.
    const bool gated = s.variable == "h" ? s.pair.a != 1.0 : s.pair.b != 1.0 && s.pair.b != 0.0;
    if (gated) report.gates.push_back(slope_gate(s.label + ": L2 slope", s, "l2_error", lo, hi));
  }
  return report;
}

ConvergenceReport cmd_effectivity(const ExperimentConfig& config, Exec exec) {
  ConvergenceReport report;
  report.study = config.study;
  const auto c = config.make_case();
  const double dt = config.dts.front();

  if (config.study == StudyKind::effectivity_t) {
    const int level = config.levels.front();
    const double t_max = *std::max_element(config.t_values.begin(), config.t_values.end());
    const auto start = Clock::now();
    const TriMesh mesh = disk_mesh(level);
    const auto history = run_history(mesh, c, config.solver_for(dt, t_max), config.boundary, exec);
    const double run_seconds = seconds_since(start);
    Sweep s;
    s.label = c.name() + " T-sweep";
    s.variable = "T";
    for (double T : config.t_values) {
      const auto part_start = Clock::now();
      const auto prefix = history.prefix(static_cast<std::size_t>(std::lround(T / dt)));
      auto cell = evaluate_history(prefix, c, level, true, exec);
      cell.wall_seconds = seconds_since(part_start) + (T == t_max ? run_seconds : 0.0);
      s.rows.push_back(std::move(cell));
    }
    std::sort(s.rows.begin(), s.rows.end(), [](const auto& a, const auto& b) { return a.t_end < b.t_end; });
    s.fit({"kappa", "sup_l2_error_sq", "int_eta_i_q", "int_eta_n_sq"});
    report.gates.push_back(
        slope_gate("kappa exponent in T", s, "kappa", config.kappa_exponent_min, config.kappa_exponent_max));
    report.sweeps.push_back(std::move(s));
    return report;
  }

  Sweep s;
  s.label = c.name() + " h-sweep";
  s.variable = "h";
  for (int level : config.levels) {
    const auto start = Clock::now();
    const TriMesh mesh = disk_mesh(level);
    const auto history = run_history(mesh, c, config.solver_for(dt, config.t_end), config.boundary, exec);
    auto cell = evaluate_history(history, c, level, true, exec);
    cell.wall_seconds = seconds_since(start);
    s.rows.push_back(std::move(cell));
  }
  std::sort(s.rows.begin(), s.rows.end(), [](const auto& a, const auto& b) { return a.h < b.h; });
  s.fit({"sup_l2_error_sq", "int_eta_i_q", "int_eta_n_sq", "kappa", "reliability_ratio"});
  report.gates.push_back(
      slope_gate("sup ||e||^2 slope in h", s, "sup_l2_error_sq", config.slope_min, config.slope_max));
  report.gates.push_back(slope_gate("int eta_i^q slope in h", s, "int_eta_i_q", config.slope_min, config.slope_max));
  {
    GateResult g;
    g.name = "kappa max/min across levels";
    std::vector<double> k;
    for (const auto& r : s.rows) {
      if (r.kappa) k.push_back(*r.kappa);
    }
    if (k.size() >= 2) {
      const double ratio = *std::max_element(k.begin(), k.end()) / *std::min_element(k.begin(), k.end());
      g.passed = ratio <= config.kappa_ratio_max;
      g.detail = "ratio " + describe(ratio) + " <= " + describe(config.kappa_ratio_max);
    } else {
      g.detail = "fewer than two kappa values";
    }
    report.gates.push_back(g);
  }
  report.sweeps.push_back(std::move(s));
  return report;
}

AcLossStudy cmd_acloss(const ExperimentConfig& config, Exec exec) {
  AcLossStudy study;
  const auto c = config.make_case();
  const auto& params = c.params();
  const double dt = config.dts.front();
  study.q_exact = ac_loss_exact(c);
  for (int level : config.levels) {
    const TriMesh mesh = disk_mesh(level);
    const auto history = run_history(mesh, c, config.solver_for(dt, config.t_end), config.boundary, exec);
    const auto errors = error_summary(history, c, params, exec);
    const auto estimate = accumulate(history, c, params, exec);
    AcLossRow row;
    row.level = level;
    row.h = mesh.mesh_size();
    row.report = ac_loss_report(history, c, params, estimate, errors, study.q_exact, exec);
    study.rows.push_back(row);
  }
  std::sort(study.rows.begin(), study.rows.end(), [](const auto& a, const auto& b) { return a.h > b.h; });

  GateResult holds;
  holds.name = "middle bound holds at every level";
  holds.passed = !study.rows.empty();
  for (const auto& r : study.rows) holds.passed = holds.passed && r.report.middle_holds;
  holds.detail = std::to_string(study.rows.size()) + " levels checked";
  study.gates.push_back(holds);

  GateResult decreasing;
  decreasing.name = "|dQ| strictly decreases under refinement";
  decreasing.passed = study.rows.size() >= 2;
  for (std::size_t i = 1; i < study.rows.size(); ++i) {
    decreasing.passed = decreasing.passed && study.rows[i].report.delta < study.rows[i - 1].report.delta;
  }
  decreasing.detail = "coarse to fine";
  study.gates.push_back(decreasing);
  return study;
}

double front_concentration(const TriMesh& mesh, std::span<const std::int32_t> edges,
                           std::span<const double> values, double radius, double band) {
  if (edges.size() != values.size()) throw ContractViolation("front_concentration: size mismatch");
  if (edges.empty()) return 0.0;
  std::vector<std::size_t> order(edges.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  // Ties broken by index so the selection is deterministic.
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return values[a] != values[b] ? values[a] > values[b] : a < b;
  });
  const std::size_t top = std::max<std::size_t>(1, edges.size() / 10);
  std::size_t near = 0;
  for (std::size_t k = 0; k < top; ++k) {
    const Vec2 m = mesh.edge_midpoint(static_cast<std::size_t>(edges[order[k]]));
    if (std::abs(norm(m) - radius) <= band) ++near;
  }
  return static_cast<double>(near) / static_cast<double>(top);
}

SnapshotMaps snapshot_maps(const EdgeField& u_new, const EdgeField& u_old, double dt,
                           const VectorField& exact, const ScalarField& exact_curl,
                           const TimeVectorField& forcing, const PowerLawParams& params, Exec exec) {
  SnapshotMaps maps;
  maps.time = u_new.time();
  const auto& mesh = u_new.mesh();
  maps.l2_error = local_l2_error_sq(u_new, exact, exec);
  for (double& v : maps.l2_error) v = std::sqrt(v);
  maps.curl_error = local_curl_error_power(u_new, exact_curl, params.p, exec);
  for (double& v : maps.curl_error) v = std::pow(v, 1.0 / params.p);
  const double t_eval = 0.5 * (u_new.time() + u_old.time());
  auto est = step_estimators(u_new, u_old, dt, forcing, t_eval, params, exec);
  maps.eta_i = std::move(est.eta_i);
  maps.eta_n = std::move(est.eta_n);
  maps.eta_t = std::move(est.eta_t);
  const auto interior = mesh.interior_edges();
  maps.edges.assign(interior.begin(), interior.end());
  return maps;
}

SnapshotStudy cmd_snapshot(const ExperimentConfig& config, Exec exec) {
  SnapshotStudy study;
  const auto c = config.make_case();
  const double dt = config.dts.front();
  const bool front = std::holds_alternative<MovingFront>(c.variant());
  study.meshes.reserve(config.levels.size());
  for (int level : config.levels) study.meshes.push_back(disk_mesh(level));

  for (std::size_t m = 0; m < config.levels.size(); ++m) {
    const TriMesh& mesh = study.meshes[m];
    const auto history = run_history(mesh, c, config.solver_for(dt, config.t_end), config.boundary, exec);
    for (double t : config.snapshot_times) {
      const auto n = static_cast<std::size_t>(std::lround(t / dt));
      if (n == 0) throw ConfigError("snapshot times must be > 0");
      auto maps = snapshot_maps(history.snapshots[n], history.snapshots[n - 1], dt, c.field_at(history.times[n]),
                                c.curl_at(history.times[n]), c.problem(config.boundary).forcing, c.params(), exec);
      maps.level = config.levels[m];
      maps.mesh_index = m;
      if (front) {
        const double radius = std::max(0.0, 1.0 - history.times[n]);
        maps.front_fraction = front_concentration(mesh, maps.edges, maps.eta_n, radius, 2.0 * mesh.mesh_size());
        GateResult g;
        g.name = "eta_n top decile near front (level " + std::to_string(maps.level) + ", t = " +
                 describe(maps.time) + ")";
        g.passed = *maps.front_fraction >= config.front_fraction_min;
        g.detail = "fraction " + describe(*maps.front_fraction) + " >= " + describe(config.front_fraction_min);
        study.gates.push_back(g);
      }
      study.maps.push_back(std::move(maps));
    }
  }
  return study;
}

void prepare_output(const ExperimentConfig& config, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  write_text(dir / "config.ini", config.source.empty() ? render_config(config) : config.source);
}

void write_convergence(const ConvergenceReport& report, const ExperimentConfig& config,
                       const std::filesystem::path& dir) {
  prepare_output(config, dir);
  CsvTable results(kCellColumns);
  CsvTable slopes({"sweep", "variable", "metric", "slope", "intercept", "residual", "points"});
  CsvTable timing({"sweep", "level", "dt", "t_end", "wall_seconds"});
  nlohmann::json summary;
  summary["config"] = config_json(config);
  summary["sweeps"] = nlohmann::json::array();
  for (std::size_t k = 0; k < report.sweeps.size(); ++k) {
    const auto& s = report.sweeps[k];
    for (const auto& r : s.rows) {
      add_cell(results, s.label, r);
      timing.row().cell(s.label).cell(r.level).cell(r.dt).cell(r.t_end).cell(r.wall_seconds);
    }
    for (const auto& [metric, fit] : s.slopes) {
      slopes.row().cell(s.label).cell(s.variable).cell(metric).cell(fit.slope).cell(fit.intercept);
      slopes.cell(fit.residual).cell(fit.points);
    }
    summary["sweeps"].push_back({{"label", s.label}, {"variable", s.variable}, {"rows", s.rows.size()},
                                 {"slopes", slopes_json(s)}});
    if (config.svg) {
      std::vector<PlotSeries> series;
      for (const auto& metric : {"l2_error", "sup_l2_error_sq", "int_eta_i_q", "int_eta_n_sq", "kappa"}) {
        const auto y = s.column(metric);
        if (std::any_of(y.begin(), y.end(), [](double v) { return v > 0.0; })) {
          series.push_back({metric, s.variable_values(), y});
        }
      }
      write_text(dir / (sweep_file_stem(k) + ".svg"), loglog_svg(s.label, s.variable, series));
    }
  }
  summary["gates"] = gates_json(report.gates);
  summary["passed"] = report.gates_passed();
  results.write(dir / "results.csv");
  slopes.write(dir / "slopes.csv");
  timing.write(dir / "timing.csv");
  write_text(dir / "summary.json", summary.dump(2) + "\n");
}

void write_acloss(const AcLossStudy& study, const ExperimentConfig& config, const std::filesystem::path& dir) {
  prepare_output(config, dir);
  CsvTable t({"level", "h", "q_exact", "q_discrete", "delta", "bound_m", "int_curl_error_p", "middle_bound",
              "unscaled_bound", "middle_holds"});
  for (const auto& r : study.rows) {
    const auto& a = r.report;
    t.row().cell(r.level).cell(r.h).cell(a.q_exact).cell(a.q_discrete).cell(a.delta).cell(a.bound_m);
    t.cell(a.int_curl_error_p).cell(a.middle_bound).cell(a.unscaled_bound);
    t.cell(std::string(a.middle_holds ? "true" : "false"));
  }
  t.write(dir / "acloss.csv");
  nlohmann::json summary;
  summary["config"] = config_json(config);
  summary["q_exact"] = study.q_exact;
  summary["gates"] = gates_json(study.gates);
  summary["passed"] = study.gates_passed();
  write_text(dir / "summary.json", summary.dump(2) + "\n");
}

void write_snapshot(const SnapshotStudy& study, const ExperimentConfig& config, const std::filesystem::path& dir) {
  prepare_output(config, dir);
  nlohmann::json summary;
  summary["config"] = config_json(config);
  summary["maps"] = nlohmann::json::array();
  for (std::size_t k = 0; k < study.maps.size(); ++k) {
    const auto& m = study.maps[k];
    const TriMesh& mesh = study.meshes.at(m.mesh_index);
    const std::string stem = "snapshot" + std::to_string(k);
    CsvTable elems({"triangle", "cx", "cy", "l2_error", "curl_error", "eta_i"});
    for (std::size_t t = 0; t < mesh.num_triangles(); ++t) {
      const Vec2 c = mesh.centroid(t);
      elems.row().cell(static_cast<long>(t)).cell(c.x).cell(c.y).cell(m.l2_error[t]).cell(m.curl_error[t]);
      elems.cell(m.eta_i[t]);
    }
    CsvTable edges({"edge", "mx", "my", "eta_n", "eta_t"});
    for (std::size_t i = 0; i < m.edges.size(); ++i) {
      const Vec2 c = mesh.edge_midpoint(static_cast<std::size_t>(m.edges[i]));
      edges.row().cell(static_cast<long>(m.edges[i])).cell(c.x).cell(c.y).cell(m.eta_n[i]).cell(m.eta_t[i]);
    }
    elems.write(dir / (stem + "_elements.csv"));
    edges.write(dir / (stem + "_edges.csv"));
    nlohmann::json entry{{"file_stem", stem}, {"level", m.level}, {"time", m.time},
                         {"triangles", mesh.num_triangles()}, {"interior_edges", m.edges.size()}};
    if (m.front_fraction) entry["front_fraction"] = *m.front_fraction;
    summary["maps"].push_back(entry);
    if (config.svg) {
      write_text(dir / (stem + "_l2_error.svg"), triangle_map_svg(mesh, m.l2_error, "local L2 error"));
      write_text(dir / (stem + "_curl_error.svg"), triangle_map_svg(mesh, m.curl_error, "local curl error"));
      write_text(dir / (stem + "_eta_i.svg"), triangle_map_svg(mesh, m.eta_i, "eta_i"));
      write_text(dir / (stem + "_eta_n.svg"), edge_map_svg(mesh, m.edges, m.eta_n, "eta_n"));
    }
  }
  summary["gates"] = gates_json(study.gates);
  summary["passed"] = study.gates_passed();
  write_text(dir / "summary.json", summary.dump(2) + "\n");
}

}  // namespace pcurl::cli
