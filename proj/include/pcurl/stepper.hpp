#pragma once

#include <Eigen/SparseCholesky>
#include <optional>
#include <vector>

#include "pcurl/assembly.hpp"
#include "pcurl/error.hpp"
#include "pcurl/nedelec.hpp"

namespace pcurl {

struct StepperConfig {
  double dt = 1e-3;
  double t_end = 1e-3;
  double newton_rel_tol = 1e-10;
  double newton_abs_tol = 1e-12;
  int newton_max_iter = 50;
  double line_search_shrink = 0.5;
  int line_search_max = 30;
  /// Solve p = 2 first and walk p geometrically up to the target inside each step.
  bool p_continuation = false;

  void validate() const;
  /// Index of the last time level, round(t_end / dt).
  long num_steps() const;
};

/// Forcing and tangential boundary source of one problem. With `homogeneous`
/// the boundary dofs are held at zero and `boundary` is ignored.
struct ProblemData {
  TimeVectorField forcing;
  TimeVectorField boundary;
  bool homogeneous = false;
};

class NonConvergence : public Error {
 public:
  NonConvergence(long step_index, int iterations, double residual_norm, const std::string& why);
  long step_index() const noexcept { return step_index_; }
  int iterations() const noexcept { return iterations_; }
  double residual_norm() const noexcept { return residual_norm_; }

 private:
  long step_index_;
  int iterations_;
  double residual_norm_;
};

struct StepStats {
  int iterations = 0;
  /// Residual norms, starting with the initial guess.
  std::vector<double> residual_history;
};

/// Per-snapshot ingredients of the discrete energy balance.
struct EnergyEntry {
  double l2_sq = 0.0;            // ||u^n||^2
  double curl_lp_power = 0.0;    // ||curl u^n||_p^p
  double forcing_pairing = 0.0;  // (f^n, u^n); zero for the initial level
};

struct TimeHistory {
  double dt = 0.0;
  long first_step = 0;
  bool homogeneous = false;
  std::vector<double> times;
  std::vector<EdgeField> snapshots;
  /// One entry per step taken (snapshots.size() - 1).
  std::vector<StepStats> steps;
  std::vector<EnergyEntry> energy;

  std::size_t num_steps() const { return steps.size(); }
  const TriMesh& mesh() const { return snapshots.front().mesh(); }
  /// Snapshots [0, last_step] as a new history (used for T-sweeps on one run).
  TimeHistory prefix(std::size_t last_step) const;
};

/// Backward Euler in time, damped Newton for each step. Time level n sits at
/// n * dt exactly, so restarted runs reproduce the same bits.
class Stepper {
 public:
  Stepper(const TriMesh& mesh, PowerLawParams params, StepperConfig config,
          Exec exec = Exec::parallel);

  const Assembler& assembler() const { return assembler_; }
  const StepperConfig& config() const { return config_; }
  const PowerLawParams& params() const { return params_; }
  double time_of(long step_index) const { return static_cast<double>(step_index) * config_.dt; }

  /// Solves for level `new_index` from u_old (level new_index - 1).
  /// Throws NonConvergence.
  EdgeField step(const EdgeField& u_old, long new_index, const ProblemData& problem,
                 StepStats* stats = nullptr, EnergyEntry* energy = nullptr);

  /// Steps from `initial` (at level first_step) to round(t_end/dt).
  TimeHistory run(const EdgeField& initial, const ProblemData& problem, long first_step = 0);

  /// Boundary dof values at a time (zero vector for homogeneous problems).
  Eigen::VectorXd boundary_values(const ProblemData& problem, double time) const;

 private:
  void newton(EdgeField& u, const EdgeField& u_old, const Eigen::VectorXd& load,
              const Eigen::VectorXd& g, const PowerLawParams& params, long step_index,
              StepStats& stats);

  const TriMesh* mesh_;
  PowerLawParams params_;
  StepperConfig config_;
  Assembler assembler_;
  std::vector<std::int32_t> constrained_;
  Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> solver_;
  bool analyzed_ = false;
};

struct EnergyStepCheck {
  long step = 0;
  double lhs = 0.0;  // ||u^n||^2 + 2 dt alpha ||curl u^n||_p^p
  double rhs = 0.0;  // ||u^{n-1}||^2 + 2 dt (f^n, u^n)
  double margin = 0.0;
  double tolerance = 0.0;
  bool holds = true;
};

struct EnergyReport {
  std::vector<EnergyStepCheck> steps;
  bool all_hold = true;
  /// min over steps of margin / max(scale, tiny).
  double worst_relative_margin = 0.0;
  double total_margin = 0.0;
};

/// Discrete energy inequality per step. Requires a homogeneous-BC history
/// (ContractViolation otherwise); violations are reported, never thrown.
EnergyReport energy_check(const TimeHistory& history, const PowerLawParams& params);

}  // namespace pcurl
