#include <numeric>

#include "pcurl/error.hpp"
#include "pcurl/estimators.hpp"
#include "support.hpp"

using namespace pcurl;

namespace {

PowerLawParams law(double p) { return {p, 1.0, 1e-10}; }

StepperConfig grid(double dt, double t_end) {
  StepperConfig c;
  c.dt = dt;
  c.t_end = t_end;
  return c;
}

const TimeVectorField kZeroForce = [](Vec2, double) { return Vec2{0, 0}; };

Eigen::VectorXd random_vector(std::size_t n, std::uint64_t seed) {
  auto g = testing::rng(seed);
  Eigen::VectorXd v(static_cast<Eigen::Index>(n));
  for (auto& x : v) x = testing::uniform(g, -1, 1);
  return v;
}

Bary bary_of(const TriMesh& m, std::size_t t, Vec2 x) {
  const auto& tri = m.triangle(t);
  const Vec2 a = m.vertex(tri[0]), b = m.vertex(tri[1]), c = m.vertex(tri[2]);
  const double area2 = cross(b - a, c - a);
  const double l1 = cross(x - a, c - a) / area2;
  const double l2 = cross(b - a, x - a) / area2;
  return {1.0 - l1 - l2, l1, l2};
}

double rss(const std::vector<double>& v) {
  return std::sqrt(std::inner_product(v.begin(), v.end(), v.begin(), 0.0));
}

TimeHistory run_case(const TriMesh& m, const ManufacturedCase& c, double dt, double T, Exec exec = Exec::parallel) {
  Stepper s(m, c.params(), grid(dt, T), exec);
  return s.run(interpolate(m, c.field_at(0.0), 0.0), c.problem());
}

// Front a=3, p=25, dt=5e-4, T=0.1 on levels 1-3, computed once.
struct FrontRuns {
  std::vector<TriMesh> meshes;
  std::vector<TimeHistory> histories;
  std::vector<AccumulatedEstimate> estimates;
  std::vector<ErrorSummary> errors;
  double q_exact = 0.0;
};

const FrontRuns& front_runs() {
  static const FrontRuns runs = [] {
    FrontRuns r;
    const ManufacturedCase c(MovingFront{3}, law(25), 0.1);
    for (int level = 1; level <= 3; ++level) r.meshes.push_back(disk_mesh(level));
    for (const auto& m : r.meshes) {
      r.histories.push_back(run_case(m, c, 5e-4, 0.1));
      r.estimates.push_back(accumulate(r.histories.back(), c, c.params()));
      r.errors.push_back(error_summary(r.histories.back(), c, c.params()));
    }
    r.q_exact = ac_loss_exact(c);
    return r;
  }();
  return runs;
}

}  // namespace

TEST_CASE("zero step gives zero estimators") {
  const TriMesh m = disk_mesh(2);
  const EdgeField zero(m);
  const auto est = step_estimators(zero, zero, 0.1, kZeroForce, 0.05, law(5));
  CHECK(est.total_i == 0.0);
  CHECK(est.total_d == 0.0);
  CHECK(est.total_t == 0.0);
  CHECK(est.total_n == 0.0);
  CHECK(est.eta_i.size() == m.num_triangles());
  CHECK(est.eta_n.size() == m.interior_edges().size());
  CHECK(est.time == 0.05);
}

TEST_CASE("flux jump on a two-triangle mesh") {
  const TriMesh m = testing::two_triangles();
  REQUIRE(m.interior_edges().size() == 1);
  const EdgeField u(m, random_vector(m.num_edges(), 1));
  const double c1 = field_curl(u, 0), c2 = field_curl(u, 1);
  REQUIRE(std::abs(c1 - c2) > 0.1);
  const auto est = step_estimators(u, u, 0.1, kZeroForce, 0.0, law(2));
  const double hf = m.h_F(m.interior_edges()[0]);
  CHECK(hf == doctest::Approx(std::sqrt(2.0)));
  CHECK(est.eta_t[0] == doctest::Approx(hf * std::abs(c1 - c2)).epsilon(1e-14));
  CHECK(est.eta_n[0] == 0.0);
  CHECK(est.total_i == 0.0);
}

TEST_CASE("local estimators against independent quadrature") {
  const TriMesh m = disk_mesh(2);
  const ManufacturedCase c(RadialSmooth{2, 1}, law(2), 1.0);
  const double dt = 0.05;
  const EdgeField u_old = interpolate(m, c.field_at(0.3), 0.3);
  Stepper s(m, law(2), grid(dt, 1.0));
  const EdgeField u_new = s.step(u_old, 7, c.problem());
  const auto f = c.problem().forcing;
  const double t_eval = 0.325;
  const auto est = step_estimators(u_new, u_old, dt, f, t_eval, law(2));
  const EdgeField rate(m, (u_new.dofs() - u_old.dofs()) / dt);

  const auto& rule = triangle_rule_degree5();
  for (std::size_t t = 0; t < m.num_triangles(); ++t) {
    double sq = 0.0;
    for (std::size_t q = 0; q < rule.points.size(); ++q) {
      const Vec2 r = f(m.point(t, rule.points[q]), t_eval) - eval_field(rate, t, rule.points[q]).value;
      sq += 2.0 * m.area(t) * rule.weights[q] * dot(r, r);
    }
    CHECK(est.eta_i[t] == doctest::Approx(m.h_K(t) * std::sqrt(sq)).epsilon(1e-12));
    CHECK(est.eta_d[t] == 0.0);
  }

  const auto& line = gauss_line4();
  const auto interior = m.interior_edges();
  for (std::size_t k = 0; k < interior.size(); ++k) {
    const auto e = interior[k];
    const Vec2 a = m.vertex(m.edge(e)[0]), b = m.vertex(m.edge(e)[1]);
    const double hf = norm(b - a);
    const Vec2 n{(b - a).y / hf, -(b - a).x / hf};
    const auto tris = m.edge_triangles(e);
    double sq = 0.0;
    for (std::size_t q = 0; q < line.points.size(); ++q) {
      const Vec2 x = a + line.points[q] * (b - a);
      const double jump = dot(eval_field(rate, tris[0], bary_of(m, tris[0], x)).value -
                                  eval_field(rate, tris[1], bary_of(m, tris[1], x)).value,
                              n);
      sq += line.weights[q] * hf * jump * jump;
    }
    CHECK(est.eta_n[k] == doctest::Approx(std::sqrt(hf * sq)).epsilon(1e-10));
    const EdgeField mid(m, 0.5 * (u_new.dofs() + u_old.dofs()));
    const double jump_t = field_curl(mid, tris[0]) - field_curl(mid, tris[1]);
    CHECK(est.eta_t[k] == doctest::Approx(hf * std::abs(jump_t)).epsilon(1e-12));
  }

  CHECK(est.total_i == doctest::Approx(rss(est.eta_i)).epsilon(1e-12));
  CHECK(est.total_t == doctest::Approx(rss(est.eta_t)).epsilon(1e-12));
  CHECK(est.total_n == doctest::Approx(rss(est.eta_n)).epsilon(1e-12));
  CHECK(est.total_d == 0.0);
  // Root-sum-square totals only grow as entries are added.
  double prev = 0.0;
  std::vector<double> partial;
  for (double v : est.eta_n) {
    CHECK(v >= 0.0);
    partial.push_back(v);
    const double r = rss(partial);
    CHECK(r >= prev);
    prev = r;
  }
  for (double v : est.eta_i) CHECK(v >= 0.0);
  for (double v : est.eta_t) CHECK(v >= 0.0);
}

TEST_CASE("serial and parallel estimators agree") {
  const TriMesh m = disk_mesh(4);
  const ManufacturedCase c(MovingFront{3}, law(25), 1.0);
  const EdgeField u_old(m, random_vector(m.num_edges(), 3), 0.2);
  const EdgeField u_new(m, random_vector(m.num_edges(), 4), 0.3);
  const auto a = step_estimators(u_new, u_old, 0.1, c.problem().forcing, 0.25, law(25), Exec::serial);
  const auto b = step_estimators(u_new, u_old, 0.1, c.problem().forcing, 0.25, law(25), Exec::parallel);
  CHECK(a.eta_i == b.eta_i);
  CHECK(a.eta_t == b.eta_t);
  CHECK(a.eta_n == b.eta_n);
  CHECK(testing::near_rel(a.total_i, b.total_i, 1e-13));
}

TEST_CASE("mesh mismatch") {
  const TriMesh a = disk_mesh(0), b = disk_mesh(0);
  CHECK_THROWS_AS(step_estimators(EdgeField(a), EdgeField(b), 0.1, kZeroForce, 0.0, law(5)), ContractViolation);
}

TEST_CASE("accumulation") {
  const TriMesh m = disk_mesh(2);
  SUBCASE("zero trajectory under zero forcing") {
    // b = 0 freezes h = r; its current is flat so the forcing vanishes.
    const ManufacturedCase frozen(RadialSmooth{1, 0}, law(5), 0.1);
    CHECK(frozen.forcing({0.3, 0.4}, 0.05) == Vec2{0, 0});
    TimeHistory h;
    h.dt = 0.025;
    for (int n = 0; n <= 4; ++n) {
      h.times.push_back(n * 0.025);
      h.snapshots.emplace_back(m, Eigen::VectorXd::Zero(static_cast<Eigen::Index>(m.num_edges())), n * 0.025);
    }
    h.steps.resize(4);
    const auto acc = accumulate(h, frozen, frozen.params(), Exec::parallel, 1);
    CHECK(acc.total() == 0.0);
    CHECK(acc.contributions.size() == 3);
    CHECK(ac_loss_discrete(h, law(5)) == 0.0);
  }
  SUBCASE("front starts with zero error") {
    const ManufacturedCase c(MovingFront{3}, law(25), 0.01);
    const auto h = run_case(m, c, 5e-4, 0.01);
    const auto acc = accumulate(h, c, c.params());
    CHECK(acc.initial_error_sq == 0.0);
    CHECK(acc.int_eta_d_sq == 0.0);
    CHECK(acc.contributions.size() == h.num_steps());
  }
  SUBCASE("additive over time partitions") {
    const ManufacturedCase c(RadialSmooth{2, 2}, law(5), 5e-3);
    const auto h = run_case(m, c, 5e-3 / 16, 5e-3);
    const auto whole = accumulate(h, c, c.params());
    const auto first = accumulate(h, c, c.params(), Exec::parallel, 0, 7);
    const auto second = accumulate(h, c, c.params(), Exec::parallel, 7, 16);
    CHECK(second.initial_error_sq == 0.0);
    CHECK(testing::near_rel(first.total() + second.total(), whole.total(), 1e-13));
    CHECK(testing::near_rel(first.int_eta_i_q + second.int_eta_i_q, whole.int_eta_i_q, 1e-13));
    CHECK(testing::near_rel(first.int_eta_n_sq + second.int_eta_n_sq, whole.int_eta_n_sq, 1e-13));
    double sum = whole.initial_error_sq;
    for (double v : whole.contributions) sum += v;
    CHECK(testing::near_rel(sum, whole.total(), 1e-13));
    CHECK_THROWS_AS(accumulate(h, c, c.params(), Exec::parallel, 9, 3), ContractViolation);
  }
}

TEST_CASE("effectivity is undefined for exactly representable solutions") {
  const TriMesh m = disk_mesh(2);
  const ManufacturedCase c(RadialSmooth{1, 1}, law(5), 5e-3);
  const auto h = run_case(m, c, 5e-3 / 8, 5e-3);
  CHECK_THROWS_AS(effectivity_kappa(h, c, c.params()), ZeroErrorDenominator);

  const ManufacturedCase q(RadialSmooth{2, 1}, law(5), 5e-3);
  const auto hq = run_case(m, q, 5e-3 / 8, 5e-3);
  const auto k = effectivity_kappa(hq, q, q.params());
  CHECK(k.kappa > 0.0);
  CHECK(k.kappa == doctest::Approx(k.numerator / k.denominator));
}

TEST_CASE("discrete AC loss of a constant-curl trajectory") {
  const TriMesh m = disk_mesh(2);
  const double cval = 1.3;
  const EdgeField u = interpolate(m, [cval](Vec2 x) { return Vec2{-0.5 * cval * x.y, 0.5 * cval * x.x}; });
  TimeHistory h;
  h.dt = 0.1;
  for (int n = 0; n <= 5; ++n) {
    h.times.push_back(0.1 * n);
    h.snapshots.push_back(u);
  }
  const double expect = m.total_area() * std::pow(cval, 5.0);
  CHECK(ac_loss_discrete(h, law(5)) == doctest::Approx(expect).epsilon(1e-12));
}

TEST_CASE("power difference kernel inequality") {
  auto g = testing::rng(9);
  for (double p : {2.0, 5.0, 25.0}) {
    for (int trial = 0; trial < 200; ++trial) {
      const int n = 1 + static_cast<int>(testing::uniform(g, 0, 50));
      const double T = testing::uniform(g, 0.1, 3.0);
      const double dt = T / n;
      double lhs = 0.0, diff = 0.0, m = 0.0;
      for (int k = 0; k < n; ++k) {
        const double x = testing::uniform(g, 0.01, 2.0), y = testing::uniform(g, 0.01, 2.0);
        lhs += dt * std::abs(std::pow(x, p) - std::pow(y, p));
        diff += dt * std::pow(std::abs(x - y), p);
        m = std::max({m, x, y});
      }
      CHECK(lhs <= power_difference_bound(T, p, m, diff) * (1.0 + 1e-12));
    }
  }
  CHECK(power_difference_bound(2.0, 2.0, 3.0, 4.0) == doctest::Approx(2.0 * std::sqrt(2.0) * 3.0 * 2.0));
}

TEST_CASE("front refinement study (level 1-3, T = 0.1)" * doctest::skip(std::getenv("PCURL_FAST") != nullptr)) {
  const auto& runs = front_runs();
  const ManufacturedCase c(MovingFront{3}, law(25), 0.1);

  SUBCASE("reliability ratio is bounded independently of the level") {
    std::vector<double> ratios;
    for (std::size_t k = 0; k < runs.histories.size(); ++k) {
      ratios.push_back(runs.errors[k].total() / runs.estimates[k].total());
    }
    const double spread = *std::max_element(ratios.begin(), ratios.end()) /
                          *std::min_element(ratios.begin(), ratios.end());
    CAPTURE(spread);
    CHECK(spread <= 3.0);
  }
  SUBCASE("kappa is largely independent of h") {
    std::vector<double> kappas;
    for (std::size_t k = 0; k < runs.histories.size(); ++k) {
      kappas.push_back(effectivity_kappa(runs.estimates[k], runs.errors[k]).kappa);
    }
    CHECK(*std::max_element(kappas.begin(), kappas.end()) / *std::min_element(kappas.begin(), kappas.end()) <= 2.0);
  }
  SUBCASE("middle AC-loss bound holds at every level") {
    for (std::size_t k = 0; k < runs.histories.size(); ++k) {
      const auto report =
          ac_loss_report(runs.histories[k], c, c.params(), runs.estimates[k], runs.errors[k], runs.q_exact);
      CAPTURE(k);
      CHECK(report.middle_holds);
      CHECK(report.delta <= report.middle_bound);
      CHECK(report.unscaled_bound > 0.0);
    }
  }
  SUBCASE("accumulated estimators strictly decrease under refinement") {
    for (std::size_t k = 1; k < runs.estimates.size(); ++k) {
      CAPTURE(k);
      CHECK(runs.estimates[k].int_eta_i_q < runs.estimates[k - 1].int_eta_i_q);
      CHECK(runs.estimates[k].int_eta_n_sq < runs.estimates[k - 1].int_eta_n_sq);
    }
  }
  SUBCASE("discrete AC loss within 10% of the exact value on the finest level") {
    const double q_h = ac_loss_discrete(runs.histories.back(), c.params());
    CAPTURE(q_h);
    CAPTURE(runs.q_exact);
    CHECK(std::abs(q_h / runs.q_exact - 1.0) <= 0.1);
  }
}
