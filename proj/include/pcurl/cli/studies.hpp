#pragma once

// Experiment drivers behind the CLI subcommands. Each cmd_* runs the study,
// returns an in-memory report, and (via write_*) serializes it.

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "pcurl/cli/config.hpp"
#include "pcurl/cli/report.hpp"
#include "pcurl/estimators.hpp"

namespace pcurl::cli {

/// Initial field interpolated from the case at t = 0, then stepped to t_end.
TimeHistory run_history(const TriMesh& mesh, const ManufacturedCase& c, const StepperConfig& solver,
                        BoundaryMode boundary, Exec exec);

/// One (case, level, dt, T) cell of a study.
struct CellResult {
  std::string case_name;
  int level = 0;
  double h = 0.0;
  double dt = 0.0;
  double t_end = 0.0;
  long steps = 0;
  double sup_l2_error = 0.0;
  double sup_l2_error_sq = 0.0;
  double int_curl_error_p = 0.0;
  double int_eta_i_q = 0.0;
  double int_eta_t_q = 0.0;
  double int_eta_n_sq = 0.0;
  double int_eta_d_sq = 0.0;
  double initial_error_sq = 0.0;
  /// Empty when the error sits at rounding level.
  std::optional<double> kappa;
  int newton_max = 0;
  double newton_mean = 0.0;
  /// Only for homogeneous-boundary runs.
  std::optional<bool> energy_holds;
  double wall_seconds = 0.0;

  /// (sup ||e||^2 + int ||curl e||^p) / (||e_0||^2 + accumulated estimators).
  double reliability_ratio() const;
};

/// Evaluates errors and (optionally) estimators of a finished run.
CellResult evaluate_history(const TimeHistory& history, const ManufacturedCase& c, int level,
                            bool with_estimators, Exec exec);

/// A set of cells varying along one variable ("h", "dt" or "T").
struct Sweep {
  std::string label;
  std::string variable;
  RadialPair pair;  // radial studies only
  std::vector<CellResult> rows;
  std::map<std::string, SlopeFit> slopes;

  std::vector<double> variable_values() const;
  std::vector<double> column(const std::string& metric) const;
  /// Fits every metric in `metrics` that has >= 3 positive values.
  void fit(const std::vector<std::string>& metrics);
};

struct GateResult {
  std::string name;
  bool passed = false;
  std::string detail;
};

struct ConvergenceReport {
  StudyKind study = StudyKind::verify;
  std::vector<Sweep> sweeps;
  std::vector<GateResult> gates;

  bool gates_passed() const;
};

/// RadialSmooth matrix: h-sweep at the smallest dt and dt-sweep at the finest
/// level (convergence-h / convergence-dt run only one of them).
ConvergenceReport cmd_verify(const ExperimentConfig& config, Exec exec);

/// MovingFront: effectivity-h sweeps levels at t_end; effectivity-T evaluates
/// prefixes of one run at the first level for every entry of t_values.
ConvergenceReport cmd_effectivity(const ExperimentConfig& config, Exec exec);

struct AcLossRow {
  int level = 0;
  double h = 0.0;
  AcLossReport report;
};

struct AcLossStudy {
  double q_exact = 0.0;
  std::vector<AcLossRow> rows;
  std::vector<GateResult> gates;
  bool gates_passed() const;
};

AcLossStudy cmd_acloss(const ExperimentConfig& config, Exec exec);

/// Per-triangle and per-edge maps at one time level.
struct SnapshotMaps {
  double time = 0.0;
  int level = 0;
  std::size_t mesh_index = 0;  // into SnapshotStudy::meshes
  std::vector<double> l2_error;    // ||e||_{L2(K)}
  std::vector<double> curl_error;  // ||curl e||_{Lp(K)}
  std::vector<double> eta_i;
  std::vector<std::int32_t> edges; // interior edges
  std::vector<double> eta_n;
  std::vector<double> eta_t;
  /// Share of the top decile of eta_n edges whose midpoint lies within 2h
  /// of the front radius 1 - t (MovingFront only, else empty).
  std::optional<double> front_fraction;
};

/// Maps for the step (u_old -> u_new) against exact data at u_new's time.
SnapshotMaps snapshot_maps(const EdgeField& u_new, const EdgeField& u_old, double dt,
                           const VectorField& exact, const ScalarField& exact_curl,
                           const TimeVectorField& forcing, const PowerLawParams& params, Exec exec);

/// Fraction of the top-decile values whose edge midpoint is within `band` of `radius`.
double front_concentration(const TriMesh& mesh, std::span<const std::int32_t> edges,
                           std::span<const double> values, double radius, double band);

struct SnapshotStudy {
  std::vector<TriMesh> meshes;
  std::vector<SnapshotMaps> maps;
  std::vector<GateResult> gates;
  bool gates_passed() const;
};

SnapshotStudy cmd_snapshot(const ExperimentConfig& config, Exec exec);

/// Files written into the output directory. Timing goes to timing.csv so that
/// every other file is bitwise reproducible in deterministic mode.
void write_convergence(const ConvergenceReport& report, const ExperimentConfig& config,
                       const std::filesystem::path& dir);
void write_acloss(const AcLossStudy& study, const ExperimentConfig& config, const std::filesystem::path& dir);
void write_snapshot(const SnapshotStudy& study, const ExperimentConfig& config,
                    const std::filesystem::path& dir);

/// Writes config.source (or the rendered config) to dir/config.ini, creating dir.
void prepare_output(const ExperimentConfig& config, const std::filesystem::path& dir);

}  // namespace pcurl::cli
