#pragma once

// Radially symmetric exact solutions u = h(r, t) phi_hat on the unit disk,
// with scalar curl j(r, t) = h_r + h / r and the forcing that makes them
// solve  du/dt + curl(alpha |curl u|^(p-2) curl u) = f.

#include <string>
#include <variant>

#include "pcurl/assembly.hpp"
#include "pcurl/nedelec.hpp"
#include "pcurl/stepper.hpp"

namespace pcurl {

/// h = r^a t^b; b = 0 gives a field frozen in time.
struct RadialSmooth {
  double a = 1.0;
  double b = 1.0;
};

/// h = (r - 1 + t)^a behind the front r = 1 - t, zero inside it.
struct MovingFront {
  double a = 3.0;
};

using CaseVariant = std::variant<RadialSmooth, MovingFront>;

enum class BoundaryMode { exact, homogeneous };

class ManufacturedCase {
 public:
  /// Throws InvalidArgument: a >= 1 for both families, b >= 0, t_end > 0.
  ManufacturedCase(CaseVariant variant, PowerLawParams params, double t_end);

  const CaseVariant& variant() const { return variant_; }
  const PowerLawParams& params() const { return params_; }
  double t_end() const { return t_end_; }
  std::string name() const;

  // Radial profiles. r > 0 assumed except where a limit is defined.
  double profile(double r, double t) const;     // h
  double profile_dt(double r, double t) const;  // h_t
  double current(double r, double t) const;     // j
  double current_dr(double r, double t) const;  // j_r

  Vec2 exact_field(Vec2 x, double t) const;
  double exact_curl(Vec2 x, double t) const;
  Vec2 forcing(Vec2 x, double t) const;
  Vec2 initial_field(Vec2 x) const { return exact_field(x, 0.0); }

  VectorField field_at(double t) const;
  ScalarField curl_at(double t) const;

  /// Whether j(., t) lies in W^{1,p}: for the moving front iff a > 2 - 1/p.
  bool curl_in_w1p() const;
  std::string regime() const { return curl_in_w1p() ? "smooth" : "nonsmooth"; }

  ProblemData problem(BoundaryMode mode = BoundaryMode::exact) const;

 private:
  CaseVariant variant_;
  PowerLawParams params_;
  double t_end_;
};

struct AcLossOptions {
  double radial_tol = 1e-12;
  double time_rel_tol = 1e-8;
  int max_doublings = 22;
};

/// (1/T) int_0^T ||j(., s)||_p^p ds over the exact disk: adaptive
/// Gauss-Kronrod in r, composite midpoint in t doubled until converged.
double ac_loss_exact(const ManufacturedCase& c, const AcLossOptions& options = {});
double ac_loss_exact(const ManufacturedCase& c, double t_end, const AcLossOptions& options = {});

/// ||j(., t)||_p^p over the exact disk.
double exact_curl_lp_power_disk(const ManufacturedCase& c, double t, double radial_tol = 1e-12);

}  // namespace pcurl
