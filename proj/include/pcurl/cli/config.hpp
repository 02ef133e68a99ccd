#pragma once

// Experiment configuration: flat `key = value` text with `[section]` headers.
// Arrays are comma-separated. `#` starts a comment. Keys are addressed as
// `section.key`; keys before the first header live in the empty section.

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "pcurl/assembly.hpp"
#include "pcurl/error.hpp"
#include "pcurl/manufactured.hpp"
#include "pcurl/stepper.hpp"

namespace pcurl::cli {

/// Any problem with a configuration file or its values (exit code 2).
class ConfigError : public Error {
 public:
  using Error::Error;
};

enum class StudyKind { verify, convergence_h, convergence_dt, effectivity_h, effectivity_t, snapshot, acloss };

std::string to_string(StudyKind kind);
/// Throws ConfigError for unknown names.
StudyKind parse_study(const std::string& name);

/// Raw parse result: key -> (value, line).
struct ConfigTable {
  struct Entry {
    std::string value;
    int line = 0;
  };
  std::map<std::string, Entry> entries;
  std::string source;

  bool has(const std::string& key) const { return entries.count(key) != 0; }
};

/// Throws ParseError with the offending line number.
ConfigTable parse_config_text(const std::string& text);

struct RadialPair {
  double a = 1.0;
  double b = 1.0;
};

struct ExperimentConfig {
  StudyKind study = StudyKind::verify;

  // [case]
  std::string family = "radial";  // radial | front
  double a = 1.0;
  double b = 1.0;
  PowerLawParams params{5.0, 1.0, 1e-10};
  BoundaryMode boundary = BoundaryMode::exact;
  /// (a, b) matrix for the verify study; defaults to (1,1), (2,1), (1,2), (2,2).
  std::vector<RadialPair> pairs;

  // [mesh]
  std::vector<int> levels{1, 2, 3, 4};

  // [time]
  double t_end = 5e-3;
  std::vector<double> dts{5e-3 / 64};
  /// Final times of the effectivity-T sweep (one run to the largest).
  std::vector<double> t_values;
  /// Snapshot study output times.
  std::vector<double> snapshot_times;

  // [solver]
  StepperConfig solver;

  // [output]
  std::filesystem::path out_dir = "pcurl_out";
  bool deterministic = false;
  bool svg = false;

  // [gate]: acceptance intervals used with --gate.
  double slope_min = 0.85;
  double slope_max = 1.15;
  /// Used instead of slope_min/max when a != 1 and b != 1 (space and time both inexact).
  double mixed_slope_min = 0.8;
  double mixed_slope_max = 1.2;
  double exact_tol = 1e-10;
  double kappa_ratio_max = 2.0;
  double kappa_exponent_min = -2.0;
  double kappa_exponent_max = -1.3;
  double front_fraction_min = 0.5;

  /// Verbatim text the config was parsed from (copied to the output dir).
  std::string source;

  ManufacturedCase make_case(double t_end_override = -1.0) const;
  ManufacturedCase make_radial(const RadialPair& pair) const;
  StepperConfig solver_for(double dt, double t_end_value) const;
  /// Throws ConfigError on empty lists, t_end not a multiple of a dt, etc.
  void validate() const;
};

/// Throws ParseError or ConfigError.
ExperimentConfig parse_config(const std::string& text);
ExperimentConfig load_config(const std::filesystem::path& path);

/// Text that parses back to `config` (written when no config file was given).
std::string render_config(const ExperimentConfig& config);

/// Defaults for a study when no config file is given.
ExperimentConfig default_config(StudyKind kind);

/// True when value / dt is an integer to 1e-12 relative.
bool is_multiple(double value, double dt);

}  // namespace pcurl::cli
