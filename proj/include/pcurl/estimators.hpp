#pragma once

// Residual estimators of one backward-Euler step and their time integrals.
// All time integrals use the composite midpoint rule: flux terms at the
// averaged field (u^n + u^{n-1})/2, forcing at t_{n-1/2}, and the backward
// difference (u^n - u^{n-1})/dt as the discrete time derivative.

#include <span>
#include <vector>

#include "pcurl/assembly.hpp"
#include "pcurl/error.hpp"
#include "pcurl/manufactured.hpp"
#include "pcurl/nedelec.hpp"
#include "pcurl/stepper.hpp"

namespace pcurl {

struct EstimatorBreakdown {
  /// Per triangle.
  std::vector<double> eta_i;
  std::vector<double> eta_d;
  /// Per interior edge, in the order of TriMesh::interior_edges().
  std::vector<double> eta_t;
  std::vector<double> eta_n;
  /// Root-sum-squares of the local entries.
  double total_i = 0.0;
  double total_d = 0.0;
  double total_t = 0.0;
  double total_n = 0.0;
  double time = 0.0;
};

/// Estimators for the step u_old -> u_new. Interior residual:
///   eta_i,K = h_K ||f(t_eval) - (u_new - u_old)/dt - curl(flux(curl u_mid))||_K
/// where the curl of the elementwise-constant flux vanishes; eta_d is the
/// divergence residual (identically zero for these elements); eta_t and eta_n
/// are h_F^{1/2}-weighted L2 norms of the tangential flux jump and of the
/// normal jump of the discrete time derivative over interior edges.
EstimatorBreakdown step_estimators(const EdgeField& u_new, const EdgeField& u_old, double dt,
                                   const TimeVectorField& forcing, double t_eval,
                                   const PowerLawParams& params, Exec exec = Exec::parallel);

struct AccumulatedEstimate {
  double int_eta_i_q = 0.0;   // sum dt eta_i^q
  double int_eta_t_q = 0.0;   // sum dt eta_t^q
  double int_eta_n_sq = 0.0;  // sum dt eta_n^2
  double int_eta_d_sq = 0.0;  // sum dt eta_d^2
  double initial_error_sq = 0.0;
  /// dt (eta_n^2 + eta_d^2 + eta_i^q + eta_t^q) for each step.
  std::vector<double> contributions;
  std::vector<EstimatorBreakdown> breakdowns;

  double integral() const { return int_eta_i_q + int_eta_t_q + int_eta_n_sq + int_eta_d_sq; }
  /// ||e_0||^2 + integral(); the right-hand side of the reliability bound.
  double total() const { return initial_error_sq + integral(); }
};

/// Time accumulation over steps [step_begin, step_end) of the history
/// (default: all). The initial error term is included only when step_begin == 0.
AccumulatedEstimate accumulate(const TimeHistory& history, const ManufacturedCase& c,
                               const PowerLawParams& params, Exec exec = Exec::parallel,
                               std::size_t step_begin = 0,
                               std::size_t step_end = static_cast<std::size_t>(-1));

struct ErrorSummary {
  /// max over snapshots of ||u(t_n) - u_h^n||^2.
  double sup_l2_error_sq = 0.0;
  /// sum dt ||curl u(t_{n-1/2}) - curl u_mid||_p^p.
  double int_curl_error_p = 0.0;
  std::vector<double> l2_error_sq;  // per snapshot
  std::vector<double> curl_error_p;  // per step
  /// Same quantities for the exact solution, for relative thresholds.
  double sup_l2_exact_sq = 0.0;
  double int_curl_exact_p = 0.0;

  double total() const { return sup_l2_error_sq + int_curl_error_p; }
};

ErrorSummary error_summary(const TimeHistory& history, const ManufacturedCase& c,
                           const PowerLawParams& params, Exec exec = Exec::parallel);

/// Thrown when the error of an (essentially) exactly representable solution
/// sits at rounding level, so kappa has no meaning.
class ZeroErrorDenominator : public Error {
 public:
  using Error::Error;
};

struct Effectivity {
  double kappa = 0.0;
  double numerator = 0.0;    // int eta_i^q + eta_t^q + eta_n^2
  double denominator = 0.0;  // sup ||e||^2 + int ||curl e||_p^p
};

/// Throws ZeroErrorDenominator when denominator <= 1e-24 * (the same
/// quantity for the exact solution).
Effectivity effectivity_kappa(const AccumulatedEstimate& estimate, const ErrorSummary& errors);
Effectivity effectivity_kappa(const TimeHistory& history, const ManufacturedCase& c,
                              const PowerLawParams& params, Exec exec = Exec::parallel);

/// (1/T) sum dt ||curl u_mid||_p^p over the history.
double ac_loss_discrete(const TimeHistory& history, const PowerLawParams& params,
                        Exec exec = Exec::parallel);

/// p T^{1-1/p} M^{p-1} (integral)^{1/p} with T = horizon.
double power_difference_bound(double horizon, double p, double bound_m, double integral);

struct AcLossReport {
  double q_exact = 0.0;
  double q_discrete = 0.0;
  double delta = 0.0;  // |Q(u) - Q(u_h)|
  /// max over snapshot and midpoint times of ||curl u||_p and ||curl u_h||_p.
  double bound_m = 0.0;
  double int_curl_error_p = 0.0;
  /// p T^{1-1/p} M^{p-1} (int ||curl e||_p^p)^{1/p}.
  double middle_bound = 0.0;
  /// Same prefactor applied to (||e_0||^2 + accumulated estimators)^{1/p};
  /// the unknown constants C2/C1 are set to 1 ("unscaled").
  double unscaled_bound = 0.0;
  bool middle_holds = false;
};

/// Full AC-loss comparison. `q_exact` < 0 means compute it with ac_loss_exact.
AcLossReport ac_loss_report(const TimeHistory& history, const ManufacturedCase& c,
                            const PowerLawParams& params, const AccumulatedEstimate& estimate,
                            const ErrorSummary& errors, double q_exact = -1.0,
                            Exec exec = Exec::parallel);

}  // namespace pcurl
