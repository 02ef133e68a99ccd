#include "pcurl/manufactured.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <numbers>
#include <sstream>

namespace pcurl {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

}  // namespace

ManufacturedCase::ManufacturedCase(CaseVariant variant, PowerLawParams params, double t_end)
    : variant_(variant), params_(params), t_end_(t_end) {
  params_.validate();
  if (!(t_end_ > 0.0)) throw InvalidArgument("t_end must be > 0");
  std::visit(overloaded{[](const RadialSmooth& c) {
                          if (!(c.a >= 1.0)) throw InvalidArgument("radial case needs a >= 1");
                          if (!(c.b >= 0.0)) throw InvalidArgument("radial case needs b >= 0");
                        },
                        [](const MovingFront& c) {
                          if (!(c.a >= 1.0)) throw InvalidArgument("moving front needs a >= 1");
                        }},
             variant_);
}

std::string ManufacturedCase::name() const {
  std::ostringstream os;
  std::visit(overloaded{[&](const RadialSmooth& c) { os << "radial(a=" << c.a << ",b=" << c.b << ")"; },
                        [&](const MovingFront& c) { os << "front(a=" << c.a << ")"; }},
             variant_);
  os << ",p=" << params_.p;
  return os.str();
}

double ManufacturedCase::profile(double r, double t) const {
  return std::visit(overloaded{[&](const RadialSmooth& c) { return std::pow(r, c.a) * std::pow(t, c.b); },
                               [&](const MovingFront& c) {
                                 const double s = r - 1.0 + t;
                                 return s > 0.0 ? std::pow(s, c.a) : 0.0;
                               }},
                    variant_);
}

double ManufacturedCase::profile_dt(double r, double t) const {
  return std::visit(
      overloaded{[&](const RadialSmooth& c) {
                   if (c.b == 0.0) return 0.0;
                   return c.b * std::pow(r, c.a) * std::pow(t, c.b - 1.0);
                 },
                 [&](const MovingFront& c) {
                   const double s = r - 1.0 + t;
                   return s > 0.0 ? c.a * std::pow(s, c.a - 1.0) : 0.0;
                 }},
      variant_);
}

double ManufacturedCase::current(double r, double t) const {
  return std::visit(
      overloaded{[&](const RadialSmooth& c) { return (c.a + 1.0) * std::pow(r, c.a - 1.0) * std::pow(t, c.b); },
                 [&](const MovingFront& c) {
                   const double s = r - 1.0 + t;
                   if (!(s > 0.0)) return 0.0;
                   // a + 1 - (1 - t) / r written without cancellation.
                   return std::pow(s, c.a - 1.0) * (c.a + s / r);
                 }},
      variant_);
}

double ManufacturedCase::current_dr(double r, double t) const {
  return std::visit(
      overloaded{[&](const RadialSmooth& c) {
                   if (c.a == 1.0) return 0.0;
                   return (c.a + 1.0) * (c.a - 1.0) * std::pow(r, c.a - 2.0) * std::pow(t, c.b);
                 },
                 [&](const MovingFront& c) {
                   const double s = r - 1.0 + t;
                   if (!(s > 0.0)) return 0.0;
                   const double g = c.a + s / r;
                   const double front = c.a == 1.0 ? 0.0 : (c.a - 1.0) * std::pow(s, c.a - 2.0) * g;
                   return front + std::pow(s, c.a - 1.0) * (1.0 - t) / (r * r);
                 }},
      variant_);
}

Vec2 ManufacturedCase::exact_field(Vec2 x, double t) const {
  const double r = norm(x);
  // h / r computed directly so that h = r t^b reproduces (-y, x) t^b exactly.
  const double h_over_r = std::visit(
      overloaded{[&](const RadialSmooth& c) { return std::pow(r, c.a - 1.0) * std::pow(t, c.b); },
                 [&](const MovingFront& c) {
                   const double s = r - 1.0 + t;
                   return s > 0.0 ? std::pow(s, c.a) / r : 0.0;
                 }},
      variant_);
  if (r == 0.0) return {};
  return {-h_over_r * x.y, h_over_r * x.x};
}

double ManufacturedCase::exact_curl(Vec2 x, double t) const {
  const double r = norm(x);
  if (r == 0.0) {
    if (const auto* c = std::get_if<RadialSmooth>(&variant_)) {
      return c->a == 1.0 ? 2.0 * std::pow(t, c->b) : 0.0;
    }
    return 0.0;
  }
  return current(r, t);
}

Vec2 ManufacturedCase::forcing(Vec2 x, double t) const {
  const double r = norm(x);
  if (r == 0.0) return {};
  const double j = current(r, t);
  // curl(psi z_hat) = -psi_r phi_hat with psi = alpha |j|^(p-2) j.
  const double dflux = j == 0.0 && params_.p > 2.0
                           ? 0.0
                           : params_.alpha * (params_.p - 1.0) * std::pow(std::abs(j), params_.p - 2.0) *
                                 current_dr(r, t);
  const double amplitude = profile_dt(r, t) - dflux;
  return {-amplitude * x.y / r, amplitude * x.x / r};
}

VectorField ManufacturedCase::field_at(double t) const {
  return [this, t](Vec2 x) { return exact_field(x, t); };
}

ScalarField ManufacturedCase::curl_at(double t) const {
  return [this, t](Vec2 x) { return exact_curl(x, t); };
}

bool ManufacturedCase::curl_in_w1p() const {
  const double p = params_.p;
  return std::visit(overloaded{[&](const RadialSmooth& c) { return c.a == 1.0 || p * (c.a - 2.0) + 2.0 > 0.0; },
                               [&](const MovingFront& c) { return c.a > 2.0 - 1.0 / p; }},
                    variant_);
}

ProblemData ManufacturedCase::problem(BoundaryMode mode) const {
  ProblemData data;
  data.forcing = [this](Vec2 x, double t) { return forcing(x, t); };
  data.boundary = [this](Vec2 x, double t) { return exact_field(x, t); };
  data.homogeneous = mode == BoundaryMode::homogeneous;
  return data;
}

double exact_curl_lp_power_disk(const ManufacturedCase& c, double t, double radial_tol) {
  const double p = c.params().p;
  double r0 = 0.0;
  if (std::holds_alternative<MovingFront>(c.variant())) r0 = std::max(0.0, 1.0 - t);
  if (r0 >= 1.0) return 0.0;
  // |j|^p spans hundreds of decades for large p; integrate (j / j(1))^p so the
  // adaptive error test works on O(1) values. The support [r0, 1] is mapped to
  // [0, 1]: boost's recursive error test is not invariant under interval length.
  const double j_ref = std::abs(c.current(1.0, t));
  if (j_ref == 0.0) return 0.0;
  const double width = 1.0 - r0;
  const auto* front = std::get_if<MovingFront>(&c.variant());
  auto integrand = [&](double sigma) {
    const double r = r0 + width * sigma;
    double j;
    if (front && r0 > 0.0) {
      // Distance to the front taken from sigma, not from r - 1 + t.
      const double s = width * sigma;
      j = std::pow(s, front->a - 1.0) * (front->a + s / r);
    } else {
      j = c.current(r, t);
    }
    return std::pow(std::abs(j) / j_ref, p) * r;
  };
  using boost::math::quadrature::gauss_kronrod;
  const double radial = width * gauss_kronrod<double, 31>::integrate(integrand, 0.0, 1.0, 15, radial_tol);
  return 2.0 * std::numbers::pi * radial * std::pow(j_ref, p);
}

double ac_loss_exact(const ManufacturedCase& c, double t_end, const AcLossOptions& options) {
  auto midpoint = [&](long n) {
    const double dt = t_end / static_cast<double>(n);
    double sum = 0.0;
    for (long k = 0; k < n; ++k) {
      sum += exact_curl_lp_power_disk(c, (static_cast<double>(k) + 0.5) * dt, options.radial_tol);
    }
    return sum / static_cast<double>(n);  // (1/T) * dt * sum
  };
  long n = 16;
  double previous = midpoint(n);
  for (int level = 0; level < options.max_doublings; ++level) {
    n *= 2;
    const double current = midpoint(n);
    if (std::abs(current - previous) <= options.time_rel_tol * std::abs(current)) return current;
    previous = current;
  }
  return previous;
}

double ac_loss_exact(const ManufacturedCase& c, const AcLossOptions& options) {
  return ac_loss_exact(c, c.t_end(), options);
}

}  // namespace pcurl
