// pcurl: experiment driver for the p-curl edge element solver.
//
//   pcurl mesh --level 3 --out disk3.mesh
//   pcurl mesh --inspect disk3.mesh
//   pcurl verify --config verify.ini --out runs/verify --gate
//   pcurl effectivity --mode T --deterministic
//   pcurl snapshot --out runs/snap
//   pcurl acloss --threads 4
//
// Exit codes: 0 ok, 1 other error, 2 config error, 3 Newton non-convergence,
// 4 gate failure (only with --gate).

#include <omp.h>

#include <cstdio>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "pcurl/cli/studies.hpp"

namespace {

using namespace pcurl;
using namespace pcurl::cli;

struct CommonOptions {
  std::string config;
  std::string out;
  bool deterministic = false;
  int threads = 0;
  bool gate = false;
};

void add_common(CLI::App* app, CommonOptions& o) {
  app->add_option("--config", o.config, "Experiment config file")->check(CLI::ExistingFile);
  app->add_option("--out", o.out, "Output directory (overrides output.dir)");
  app->add_flag("--deterministic", o.deterministic, "Serial kernels, bit-reproducible output");
  app->add_option("--threads", o.threads, "OpenMP thread count")->check(CLI::PositiveNumber);
  app->add_flag("--gate", o.gate, "Exit with code 4 if an acceptance gate fails");
}

// Loads the config or the defaults for `fallback`, then checks the study is one `allowed`.
ExperimentConfig resolve(const CommonOptions& o, StudyKind fallback, std::initializer_list<StudyKind> allowed,
                         const char* command) {
  ExperimentConfig config = o.config.empty() ? default_config(fallback) : load_config(o.config);
  if (std::find(allowed.begin(), allowed.end(), config.study) == allowed.end()) {
    throw ConfigError(std::string("study '") + to_string(config.study) + "' cannot run under '" + command + "'");
  }
  if (!o.out.empty()) config.out_dir = o.out;
  if (o.deterministic) config.deterministic = true;
  config.validate();
  return config;
}

Exec exec_for(const ExperimentConfig& config) { return config.deterministic ? Exec::serial : Exec::parallel; }

int finish(const std::vector<GateResult>& gates, bool gate, const std::filesystem::path& dir) {
  bool ok = true;
  for (const auto& g : gates) {
    std::printf("[%s] %s: %s\n", g.passed ? "PASS" : "FAIL", g.name.c_str(), g.detail.c_str());
    ok = ok && g.passed;
  }
  std::printf("output: %s\n", dir.string().c_str());
  return gate && !ok ? 4 : 0;
}

void print_sweeps(const ConvergenceReport& report) {
  for (const auto& s : report.sweeps) {
    std::printf("%s\n", s.label.c_str());
    std::printf("  %-6s %-12s %-12s %-12s %-12s %-12s %-12s\n", "level", "h", "dt", "T", "L2 error", "kappa",
                "newton max");
    for (const auto& r : s.rows) {
      std::printf("  %-6d %-12.4e %-12.4e %-12.4e %-12.4e %-12s %-12d\n", r.level, r.h, r.dt, r.t_end,
                  r.sup_l2_error, r.kappa ? format_double(*r.kappa).substr(0, 12).c_str() : "-", r.newton_max);
    }
    for (const auto& [metric, fit] : s.slopes) {
      std::printf("  slope(%s vs %s) = %.4f  (residual %.2e)\n", metric.c_str(), s.variable.c_str(), fit.slope,
                  fit.residual);
    }
  }
}

int run_mesh(int level, const std::string& out, const std::string& inspect) {
  const TriMesh mesh = inspect.empty() ? disk_mesh(level) : read_mesh(inspect);
  std::printf("vertices         %zu\n", mesh.num_vertices());
  std::printf("triangles        %zu\n", mesh.num_triangles());
  std::printf("edges            %zu\n", mesh.num_edges());
  std::printf("boundary edges   %zu\n", mesh.boundary_edges().size());
  std::printf("mesh size h      %.17g\n", mesh.mesh_size());
  std::printf("shape regularity %.17g\n", mesh.shape_regularity());
  std::printf("area             %.17g\n", mesh.total_area());
  if (!out.empty()) {
    write_mesh(mesh, out);
    std::printf("written: %s\n", out.c_str());
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"p-curl edge element solver and experiment driver"};
  app.require_subcommand(1);

  int level = 2;
  std::string mesh_out, mesh_inspect;
  auto* mesh_cmd = app.add_subcommand("mesh", "Generate or inspect a disk mesh");
  mesh_cmd->add_option("--level", level, "Refinement level of the disk mesh")->check(CLI::NonNegativeNumber);
  mesh_cmd->add_option("--out", mesh_out, "Write the mesh to this file");
  mesh_cmd->add_option("--inspect", mesh_inspect, "Read a mesh file and print its statistics")
      ->check(CLI::ExistingFile);

  CommonOptions opts;
  auto* verify_cmd = app.add_subcommand("verify", "Convergence study for the smooth radial family");
  add_common(verify_cmd, opts);
  std::string verify_study = "verify";
  verify_cmd->add_option("--study", verify_study, "Without --config: verify | convergence-h | convergence-dt")
      ->check(CLI::IsMember({"verify", "convergence-h", "convergence-dt"}));

  auto* eff_cmd = app.add_subcommand("effectivity", "Estimator effectivity for the moving front");
  add_common(eff_cmd, opts);
  std::string eff_mode = "h";
  eff_cmd->add_option("--mode", eff_mode, "Without --config: h (levels) or T (final times)")
      ->check(CLI::IsMember({"h", "T"}));

  auto* snap_cmd = app.add_subcommand("snapshot", "Local error and estimator maps");
  add_common(snap_cmd, opts);
  auto* ac_cmd = app.add_subcommand("acloss", "AC loss and its error bounds");
  add_common(ac_cmd, opts);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 2;
  }

  try {
    if (opts.threads > 0) omp_set_num_threads(opts.threads);
    if (mesh_cmd->parsed()) return run_mesh(level, mesh_out, mesh_inspect);

    if (verify_cmd->parsed()) {
      const auto config = resolve(opts, parse_study(verify_study),
                                  {StudyKind::verify, StudyKind::convergence_h, StudyKind::convergence_dt}, "verify");
      const auto report = cmd_verify(config, exec_for(config));
      write_convergence(report, config, config.out_dir);
      print_sweeps(report);
      return finish(report.gates, opts.gate, config.out_dir);
    }
    if (eff_cmd->parsed()) {
      const auto fallback = eff_mode == "T" ? StudyKind::effectivity_t : StudyKind::effectivity_h;
      const auto config =
          resolve(opts, fallback, {StudyKind::effectivity_h, StudyKind::effectivity_t}, "effectivity");
      const auto report = cmd_effectivity(config, exec_for(config));
      write_convergence(report, config, config.out_dir);
      print_sweeps(report);
      return finish(report.gates, opts.gate, config.out_dir);
    }
    if (snap_cmd->parsed()) {
      const auto config = resolve(opts, StudyKind::snapshot, {StudyKind::snapshot}, "snapshot");
      const auto study = cmd_snapshot(config, exec_for(config));
      write_snapshot(study, config, config.out_dir);
      for (const auto& m : study.maps) {
        std::printf("level %d t=%.6g: %zu triangles, %zu interior edges\n", m.level, m.time, m.l2_error.size(),
                    m.edges.size());
      }
      return finish(study.gates, opts.gate, config.out_dir);
    }
    if (ac_cmd->parsed()) {
      const auto config = resolve(opts, StudyKind::acloss, {StudyKind::acloss}, "acloss");
      const auto study = cmd_acloss(config, exec_for(config));
      write_acloss(study, config, config.out_dir);
      std::printf("Q(u) = %.17g\n", study.q_exact);
      std::printf("  %-6s %-12s %-12s %-12s %-12s %-12s\n", "level", "h", "Q(u_h)", "|dQ|", "middle", "unscaled");
      for (const auto& r : study.rows) {
        std::printf("  %-6d %-12.4e %-12.4e %-12.4e %-12.4e %-12.4e\n", r.level, r.h, r.report.q_discrete,
                    r.report.delta, r.report.middle_bound, r.report.unscaled_bound);
      }
      return finish(study.gates, opts.gate, config.out_dir);
    }
  } catch (const ParseError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return 2;
  } catch (const ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return 2;
  } catch (const NonConvergence& e) {
    std::fprintf(stderr, "solver error: %s\n", e.what());
    return 3;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 1;
}
