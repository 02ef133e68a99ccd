// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fails.
//
//   acceptance            all criteria
//   acceptance 2 5 9      a subset

#include <Eigen/Dense>

#include <chrono>
#include <cstdio>
#include <functional>
#include <map>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "pcurl/cli/studies.hpp"

using namespace pcurl;
using namespace pcurl::cli;

namespace {

constexpr double kT = 5e-3;
constexpr double kFrontT = 0.1;
constexpr double kFrontDt = 5e-4;

PowerLawParams law(double p) { return {p, 1.0, 1e-10}; }

StepperConfig grid(double dt, double t_end) {
  StepperConfig c;
  c.dt = dt;
  c.t_end = t_end;
  return c;
}

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

double slope(const std::vector<double>& x, const std::vector<double>& y) {
  const auto fit = fit_loglog(x, y);
  return fit ? fit->slope : std::nan("");
}

bool within(double v, double lo, double hi) { return v >= lo && v <= hi; }

// Homogeneous-data runs collected along the way for the stability criterion.
struct EnergyLog {
  int runs = 0;
  long steps = 0;
  bool all_hold = true;
  double worst = std::numeric_limits<double>::infinity();  // min margin / tolerance
  void add(const TimeHistory& h, const PowerLawParams& p) {
    const auto report = energy_check(h, p);
    ++runs;
    steps += static_cast<long>(report.steps.size());
    all_hold = all_hold && report.all_hold;
    for (const auto& s : report.steps) worst = std::min(worst, s.margin / s.tolerance);
  }
};

EnergyLog g_energy;

struct RadialRun {
  double h = 0.0;
  double dt = 0.0;
  double sup_l2 = 0.0;
};

// Exact-data run plus its homogeneous twin (energy only).
RadialRun radial_cell(const RadialPair& pair, int level, double dt) {
  const ManufacturedCase c(RadialSmooth{pair.a, pair.b}, law(5), kT);
  const TriMesh m = disk_mesh(level);
  const auto h = run_history(m, c, grid(dt, kT), BoundaryMode::exact, Exec::parallel);
  const auto errors = error_summary(h, c, c.params());
  const auto hom = run_history(m, c, grid(dt, kT), BoundaryMode::homogeneous, Exec::parallel);
  g_energy.add(hom, c.params());
  return {m.mesh_size(), dt, std::sqrt(errors.sup_l2_error_sq)};
}

Outcome h_sweep(const RadialPair& pair, std::vector<int> levels, double dt, double lo, double hi, std::string* out) {
  std::vector<double> hs, es;
  for (int l : levels) {
    const auto r = radial_cell(pair, l, dt);
    hs.push_back(r.h);
    es.push_back(r.sup_l2);
  }
  const double s = slope(hs, es);
  *out = "h-slope " + fmt("%.4f", s);
  return {within(s, lo, hi), *out};
}

Outcome dt_sweep(const RadialPair& pair, int level, std::vector<double> dts, double lo, double hi, std::string* out) {
  std::vector<double> ds, es;
  for (double dt : dts) {
    const auto r = radial_cell(pair, level, dt);
    ds.push_back(r.dt);
    es.push_back(r.sup_l2);
  }
  const double s = slope(ds, es);
  *out = "dt-slope " + fmt("%.4f", s);
  return {within(s, lo, hi), *out};
}

Outcome criterion1() {
  const ManufacturedCase c(RadialSmooth{1, 1}, law(5), kT);
  const TriMesh m = disk_mesh(2);
  const auto h = run_history(m, c, grid(kT / 8, kT), BoundaryMode::exact, Exec::parallel);
  const double err = std::sqrt(error_summary(h, c, c.params()).sup_l2_error_sq);
  g_energy.add(run_history(m, c, grid(kT / 8, kT), BoundaryMode::homogeneous, Exec::parallel), c.params());
  return {err <= 1e-10, "sup L2 error " + fmt("%.3e", err)};
}

Outcome criterion2() {
  std::string d;
  return h_sweep({2, 1}, {1, 2, 3, 4}, kT / 64, 0.85, 1.15, &d);
}

Outcome criterion3() {
  std::string d;
  return dt_sweep({1, 2}, 4, {kT / 4, kT / 8, kT / 16, kT / 32}, 0.85, 1.15, &d);
}

Outcome criterion4() {
  std::string dd, dh;
  const auto t = dt_sweep({2, 2}, 6, {kT / 4, kT / 8, kT / 16, kT / 32}, 0.8, 1.2, &dd);
  const auto h = h_sweep({2, 2}, {1, 2, 3, 4}, kT / 256, 0.8, 1.2, &dh);
  return {t.pass && h.pass, dd + " (level 6), " + dh + " (dt = T/256)"};
}

// MovingFront a=3, p=25 on levels 1-3 at T = 0.1, shared by criteria 5, 6 and 9.
struct FrontStudy {
  std::vector<TriMesh> meshes;
  std::vector<TimeHistory> histories;
  std::vector<AccumulatedEstimate> estimates;
  std::vector<ErrorSummary> errors;
  std::vector<double> h;
};

const ManufacturedCase& front_case() {
  static const ManufacturedCase c(MovingFront{3}, law(25), kFrontT);
  return c;
}

const FrontStudy& front_study() {
  static const FrontStudy s = [] {
    FrontStudy f;
    const auto& c = front_case();
    f.meshes.reserve(3);
    for (int level = 1; level <= 3; ++level) f.meshes.push_back(disk_mesh(level));
    for (const auto& m : f.meshes) {
      f.histories.push_back(run_history(m, c, grid(kFrontDt, kFrontT), BoundaryMode::exact, Exec::parallel));
      f.estimates.push_back(accumulate(f.histories.back(), c, c.params()));
      f.errors.push_back(error_summary(f.histories.back(), c, c.params()));
      f.h.push_back(m.mesh_size());
      g_energy.add(run_history(m, c, grid(kFrontDt, kFrontT), BoundaryMode::homogeneous, Exec::parallel),
                   c.params());
    }
    return f;
  }();
  return s;
}

Outcome criterion5() {
  const auto& f = front_study();
  std::vector<double> e, ei, en, ratio;
  for (std::size_t k = 0; k < f.h.size(); ++k) {
    e.push_back(f.errors[k].sup_l2_error_sq);
    ei.push_back(f.estimates[k].int_eta_i_q);
    en.push_back(f.estimates[k].int_eta_n_sq);
    ratio.push_back(f.errors[k].total() / f.estimates[k].total());
  }
  const double se = slope(f.h, e), si = slope(f.h, ei), sn = slope(f.h, en);
  const double spread = *std::max_element(ratio.begin(), ratio.end()) / *std::min_element(ratio.begin(), ratio.end());
  const bool pass = within(se, 1.7, 2.3) && within(si, 1.7, 2.3) && within(sn, 1.7, 2.3) && spread <= 3.0;
  return {pass, "slopes sup|e|^2 " + fmt("%.3f", se) + ", int eta_i^q " + fmt("%.3f", si) + ", int eta_n^2 " +
                    fmt("%.3f", sn) + "; reliability ratio max/min " + fmt("%.3f", spread)};
}

Outcome criterion6() {
  const auto& f = front_study();
  std::vector<double> kappas;
  for (std::size_t k = 0; k < f.h.size(); ++k) kappas.push_back(effectivity_kappa(f.estimates[k], f.errors[k]).kappa);
  const double ratio = *std::max_element(kappas.begin(), kappas.end()) / *std::min_element(kappas.begin(), kappas.end());

  const std::vector<double> ts{0.05, 0.1, 0.2, 0.4};
  const ManufacturedCase c(MovingFront{3}, law(25), ts.back());
  const TriMesh m = disk_mesh(2);
  const auto full = run_history(m, c, grid(kFrontDt, ts.back()), BoundaryMode::exact, Exec::parallel);
  std::vector<double> kt;
  for (double t : ts) {
    const auto h = full.prefix(std::lround(t / kFrontDt));
    kt.push_back(effectivity_kappa(h, c, c.params()).kappa);
  }
  const double expo = slope(ts, kt);
  return {ratio <= 2.0 && within(expo, -2.0, -1.3),
          "kappa max/min over levels " + fmt("%.3f", ratio) + ", T-exponent " + fmt("%.3f", expo)};
}

Outcome criterion7() {
  bool ok = true;
  std::string detail;
  for (double p : {2.0, 5.0, 25.0}) {
    std::mt19937_64 g(static_cast<std::uint64_t>(100 + p));
    std::uniform_real_distribution<double> u(-2, 2);
    double c_mono = std::numeric_limits<double>::infinity(), c_lip = 0.0;
    for (int i = 0; i < 10000; ++i) {
      const double x = u(g), y = u(g);
      if (x == y) continue;
      const double fx = flux(x, law(p)), fy = flux(y, law(p));
      const double pairing = (fx - fy) * (x - y);
      ok = ok && pairing >= 0.0;
      c_mono = std::min(c_mono, pairing / std::pow(std::abs(x - y), p));
      c_lip = std::max(c_lip, std::abs(fx - fy) / (std::abs(x - y) * std::pow(std::abs(x) + std::abs(y), p - 2)));
    }
    ok = ok && c_mono >= std::pow(2.0, 2.0 - p) * (1 - 1e-12) && c_lip <= (p - 1) * (1 + 1e-12);
    detail += "p=" + fmt("%g", p) + " mono " + fmt("%.3g", c_mono) + " lip " + fmt("%.3g", c_lip) + "; ";
  }

  const TriMesh m = disk_mesh(1);
  const Assembler a(m, Exec::serial);
  const auto n = static_cast<Eigen::Index>(m.num_edges());
  std::mt19937_64 g(21);
  std::uniform_real_distribution<double> u(-1, 1);
  EdgeField w = interpolate(m, [](Vec2 x) { return Vec2{-x.y, x.x}; });
  Eigen::VectorXd v(n);
  for (Eigen::Index i = 0; i < n; ++i) w.dofs()[i] += 0.02 * u(g);
  for (auto& x : v) x = u(g);
  const EdgeField old(m);
  const Eigen::VectorXd load = Eigen::VectorXd::Zero(n);
  const double dt = 0.1;
  const Eigen::VectorXd r0 = a.residual(w, old, dt, load, law(5));
  const Eigen::VectorXd jv = a.jacobian(w, dt, law(5)) * v;
  double min_order = std::numeric_limits<double>::infinity(), prev = 0.0;
  for (double tau : {1e-2, 1e-3, 1e-4, 1e-5}) {
    EdgeField wt = w;
    wt.dofs() += tau * v;
    const double rem = (a.residual(wt, old, dt, load, law(5)) - r0 - tau * jv).norm();
    if (prev > 0.0) min_order = std::min(min_order, std::log10(prev / rem));
    prev = rem;
  }
  ok = ok && min_order >= 1.9;
  detail += "Taylor order " + fmt("%.3f", min_order);
  return {ok, detail};
}

Outcome criterion8() {
  // Runs came from criteria 1-5; an empty log means none were selected.
  if (g_energy.runs == 0) return {false, "no homogeneous runs (run with criteria 1-5)"};
  return {g_energy.all_hold, std::to_string(g_energy.runs) + " runs, " + std::to_string(g_energy.steps) +
                                 " steps, worst margin/tolerance " + fmt("%.3e", g_energy.worst)};
}

Outcome criterion9() {
  const auto& f = front_study();
  const auto& c = front_case();
  const double q_exact = ac_loss_exact(c);
  bool holds = true;
  std::vector<double> deltas;
  std::string detail;
  for (std::size_t k = 0; k < f.h.size(); ++k) {
    const auto r = ac_loss_report(f.histories[k], c, c.params(), f.estimates[k], f.errors[k], q_exact);
    holds = holds && r.middle_holds;
    deltas.push_back(r.delta);
    detail += "L" + std::to_string(k + 1) + " |dQ| " + fmt("%.3e", r.delta) + " <= " + fmt("%.3e", r.middle_bound) + "; ";
  }
  bool decreasing = true;
  for (std::size_t k = 1; k < deltas.size(); ++k) decreasing = decreasing && deltas[k] < deltas[k - 1];
  return {holds && decreasing, detail + (decreasing ? "strictly decreasing" : "not strictly decreasing")};
}

Outcome criterion10() {
  const TriMesh m = disk_mesh(0);
  const ManufacturedCase c(RadialSmooth{2, 1}, law(2), 1.0);
  const double dt = 0.05, t = 7 * dt;
  Stepper s(m, law(2), grid(dt, 1.0), Exec::serial);
  std::mt19937_64 g(5);
  std::uniform_real_distribution<double> u(-1, 1);
  Eigen::VectorXd dofs(static_cast<Eigen::Index>(m.num_edges()));
  for (auto& v : dofs) v = u(g);
  const auto problem = c.problem();
  const EdgeField old(m, dofs, t - dt);
  const EdgeField next = s.step(old, 7, problem);

  const Eigen::MatrixXd mass = s.assembler().mass();
  const Eigen::MatrixXd stiff = s.assembler().curl_stiffness();
  Eigen::MatrixXd lhs = mass / dt + stiff;
  Eigen::VectorXd rhs = mass * dofs / dt + s.assembler().load(problem.forcing, t);
  const Eigen::VectorXd gv = s.boundary_values(problem, t);
  std::vector<bool> fixed(m.num_edges(), false);
  for (auto e : m.boundary_edges()) fixed[e] = true;
  for (Eigen::Index i = 0; i < lhs.rows(); ++i) {
    if (fixed[i]) continue;
    for (auto j : m.boundary_edges()) rhs[i] -= lhs(i, j) * gv[j];
  }
  for (auto e : m.boundary_edges()) {
    lhs.row(e).setZero();
    lhs.col(e).setZero();
    lhs(e, e) = 1.0;
    rhs[e] = gv[e];
  }
  const Eigen::VectorXd expect = lhs.fullPivLu().solve(rhs);
  const double rel = (next.dofs() - expect).norm() / expect.norm();
  return {rel <= 1e-10, "relative difference " + fmt("%.3e", rel)};
}

}  // namespace

int main(int argc, char** argv) {
  const std::vector<std::pair<int, std::function<Outcome()>>> all{
      {1, criterion1}, {2, criterion2}, {3, criterion3}, {4, criterion4},  {5, criterion5},
      {6, criterion6}, {7, criterion7}, {8, criterion8}, {9, criterion9}, {10, criterion10}};
  const std::map<int, double> budget{{1, 10},   {2, 300},  {3, 300}, {4, 600}, {5, 1200},
                                     {6, 1800}, {7, 10},   {8, 0},   {9, 0},   {10, 10}};
  std::set<int> chosen;
  for (int i = 1; i < argc; ++i) chosen.insert(std::atoi(argv[i]));

  int failed = 0;
  for (const auto& [id, run] : all) {
    if (!chosen.empty() && !chosen.count(id)) continue;
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    // 8 and 9 reuse earlier runs; their own time is bookkeeping only.
    const double limit = budget.at(id);
    const bool in_time = limit <= 0.0 || secs <= limit;
    const bool pass = o.pass && in_time;
    failed += !pass;
    std::printf("criterion %2d: %s  %s  [%.1f s%s]\n", id, pass ? "PASS" : "FAIL", o.detail.c_str(), secs,
                in_time ? "" : ", over time budget");
    std::fflush(stdout);
  }
  return failed == 0 ? 0 : 1;
}
