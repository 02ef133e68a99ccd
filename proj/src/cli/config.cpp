#include "pcurl/cli/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>
#include <type_traits>

namespace pcurl::cli {

namespace {

std::string trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r");
  if (begin == std::string::npos) return {};
  const auto end = s.find_last_not_of(" \t\r");
  return s.substr(begin, end - begin + 1);
}

std::vector<std::string> split_list(const std::string& value) {
  std::vector<std::string> out;
  std::stringstream ss(value);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(trim(item));
  return out;
}

class Reader {
 public:
  explicit Reader(const ConfigTable& table) : table_(table) {}

  bool has(const std::string& key) {
    used_.insert(key);
    return table_.has(key);
  }

  double number(const std::string& key, double fallback) {
    if (!has(key)) return fallback;
    return to_double(key, table_.entries.at(key).value);
  }

  int integer(const std::string& key, int fallback) {
    if (!has(key)) return fallback;
    return to_int(key, table_.entries.at(key).value);
  }

  bool boolean(const std::string& key, bool fallback) {
    if (!has(key)) return fallback;
    const auto& v = table_.entries.at(key).value;
    if (v == "true" || v == "yes" || v == "1" || v == "on") return true;
    if (v == "false" || v == "no" || v == "0" || v == "off") return false;
    fail(key, "expected a boolean, got '" + v + "'");
  }

  std::string text(const std::string& key, const std::string& fallback) {
    if (!has(key)) return fallback;
    return table_.entries.at(key).value;
  }

  std::vector<double> numbers(const std::string& key, std::vector<double> fallback) {
    if (!has(key)) return fallback;
    std::vector<double> out;
    for (const auto& item : split_list(table_.entries.at(key).value)) out.push_back(to_double(key, item));
    return out;
  }

  std::vector<int> integers(const std::string& key, std::vector<int> fallback) {
    if (!has(key)) return fallback;
    std::vector<int> out;
    for (const auto& item : split_list(table_.entries.at(key).value)) out.push_back(to_int(key, item));
    return out;
  }

  std::vector<RadialPair> pairs(const std::string& key, std::vector<RadialPair> fallback) {
    if (!has(key)) return fallback;
    std::vector<RadialPair> out;
    for (const auto& item : split_list(table_.entries.at(key).value)) {
      const auto colon = item.find(':');
      if (colon == std::string::npos) fail(key, "expected a:b pairs, got '" + item + "'");
      out.push_back({to_double(key, trim(item.substr(0, colon))), to_double(key, trim(item.substr(colon + 1)))});
    }
    return out;
  }

  void reject_unknown() const {
    for (const auto& [key, entry] : table_.entries) {
      if (!used_.count(key)) throw ParseError(entry.line, "unknown key '" + key + "'");
    }
  }

  [[noreturn]] void fail(const std::string& key, const std::string& what) const {
    throw ParseError(table_.entries.at(key).line, key + ": " + what);
  }

 private:
  double to_double(const std::string& key, const std::string& s) const {
    double v = 0.0;
    const auto* end = s.data() + s.size();
    const auto [ptr, ec] = std::from_chars(s.data(), end, v);
    if (s.empty() || ec != std::errc() || ptr != end) fail(key, "expected a number, got '" + s + "'");
    return v;
  }

  int to_int(const std::string& key, const std::string& s) const {
    int v = 0;
    const auto* end = s.data() + s.size();
    const auto [ptr, ec] = std::from_chars(s.data(), end, v);
    if (s.empty() || ec != std::errc() || ptr != end) fail(key, "expected an integer, got '" + s + "'");
    return v;
  }

  const ConfigTable& table_;
  std::set<std::string> used_;
};

const std::vector<RadialPair> kDefaultPairs{{1, 1}, {2, 1}, {1, 2}, {2, 2}};

}  // namespace

std::string to_string(StudyKind kind) {
  switch (kind) {
    case StudyKind::verify: return "verify";
    case StudyKind::convergence_h: return "convergence-h";
    case StudyKind::convergence_dt: return "convergence-dt";
    case StudyKind::effectivity_h: return "effectivity-h";
    case StudyKind::effectivity_t: return "effectivity-T";
    case StudyKind::snapshot: return "snapshot";
    case StudyKind::acloss: return "acloss";
  }
  return "?";
}

StudyKind parse_study(const std::string& name) {
  for (auto kind : {StudyKind::verify, StudyKind::convergence_h, StudyKind::convergence_dt,
                    StudyKind::effectivity_h, StudyKind::effectivity_t, StudyKind::snapshot,
                    StudyKind::acloss}) {
    if (name == to_string(kind)) return kind;
  }
  if (name == "effectivity-t") return StudyKind::effectivity_t;
  throw ConfigError("unknown study '" + name + "'");
}

ConfigTable parse_config_text(const std::string& text) {
  ConfigTable table;
  table.source = text;
  std::istringstream in(text);
  std::string raw;
  std::string section;
  int line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    const auto hash = raw.find('#');
    const std::string line = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') throw ParseError(line_no, "unterminated section header");
      section = trim(line.substr(1, line.size() - 2));
      if (section.empty()) throw ParseError(line_no, "empty section name");
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ParseError(line_no, "expected 'key = value'");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty()) throw ParseError(line_no, "missing key");
    const std::string full = section.empty() ? key : section + "." + key;
    if (table.has(full)) throw ParseError(line_no, "duplicate key '" + full + "'");
    table.entries[full] = {value, line_no};
  }
  return table;
}

ExperimentConfig default_config(StudyKind kind) {
  ExperimentConfig c;
  c.study = kind;
  c.pairs = kDefaultPairs;
  switch (kind) {
    case StudyKind::verify:
    case StudyKind::convergence_h:
    case StudyKind::convergence_dt: {
      const double T = 5e-3;
      c.family = "radial";
      c.params.p = 5.0;
      c.t_end = T;
      c.levels = {1, 2, 3, 4};
      c.dts = {T / 8, T / 16, T / 32, T / 64};
      break;
    }
    case StudyKind::effectivity_h:
    case StudyKind::effectivity_t:
    case StudyKind::acloss:
      c.family = "front";
      c.a = 3.0;
      c.params.p = 25.0;
      c.t_end = kind == StudyKind::acloss ? 0.1 : 0.4;
      c.dts = {5e-4};
      c.levels = kind == StudyKind::effectivity_t ? std::vector<int>{2} : std::vector<int>{1, 2, 3};
      if (kind == StudyKind::effectivity_t) c.t_values = {0.05, 0.1, 0.2, 0.4};
      c.slope_min = 1.7;
      c.slope_max = 2.3;
      break;
    case StudyKind::snapshot:
      c.family = "front";
      c.a = 1.6;
      c.params.p = 10.0;
      c.t_end = 0.272;
      c.dts = {5e-4};
      c.levels = {4};
      c.snapshot_times = {0.272};
      break;
  }
  return c;
}

ExperimentConfig parse_config(const std::string& text) {
  const ConfigTable table = parse_config_text(text);
  Reader r(table);
  const StudyKind kind = parse_study(r.text("study", "verify"));
  ExperimentConfig c = default_config(kind);
  c.source = text;

  c.family = r.text("case.family", c.family);
  if (c.family != "radial" && c.family != "front") {
    r.fail("case.family", "expected 'radial' or 'front'");
  }
  c.a = r.number("case.a", c.a);
  c.b = r.number("case.b", c.b);
  c.params.p = r.number("case.p", c.params.p);
  c.params.alpha = r.number("case.alpha", c.params.alpha);
  c.params.eps_reg = r.number("case.eps_reg", c.params.eps_reg);
  const std::string boundary = r.text("case.boundary", "exact");
  if (boundary == "exact") {
    c.boundary = BoundaryMode::exact;
  } else if (boundary == "homogeneous") {
    c.boundary = BoundaryMode::homogeneous;
  } else {
    r.fail("case.boundary", "expected 'exact' or 'homogeneous'");
  }
  if (table.has("case.a") || table.has("case.b")) c.pairs = {{c.a, c.b}};
  c.pairs = r.pairs("case.pairs", c.pairs);

  c.levels = r.integers("mesh.levels", c.levels);

  c.t_end = r.number("time.t_end", c.t_end);
  c.dts = r.numbers("time.dt", c.dts);
  c.t_values = r.numbers("time.t_values", c.t_values);
  c.snapshot_times = r.numbers("time.snapshot_times", c.snapshot_times);

  auto& s = c.solver;
  s.newton_rel_tol = r.number("solver.newton_rel_tol", s.newton_rel_tol);
  s.newton_abs_tol = r.number("solver.newton_abs_tol", s.newton_abs_tol);
  s.newton_max_iter = r.integer("solver.newton_max_iter", s.newton_max_iter);
  s.line_search_shrink = r.number("solver.line_search_shrink", s.line_search_shrink);
  s.line_search_max = r.integer("solver.line_search_max", s.line_search_max);
  s.p_continuation = r.boolean("solver.p_continuation", s.p_continuation);

  c.out_dir = r.text("output.dir", c.out_dir.string());
  c.deterministic = r.boolean("output.deterministic", c.deterministic);
  c.svg = r.boolean("output.svg", c.svg);

  c.slope_min = r.number("gate.slope_min", c.slope_min);
  c.slope_max = r.number("gate.slope_max", c.slope_max);
  c.mixed_slope_min = r.number("gate.mixed_slope_min", c.mixed_slope_min);
  c.mixed_slope_max = r.number("gate.mixed_slope_max", c.mixed_slope_max);
  c.exact_tol = r.number("gate.exact_tol", c.exact_tol);
  c.kappa_ratio_max = r.number("gate.kappa_ratio_max", c.kappa_ratio_max);
  c.kappa_exponent_min = r.number("gate.kappa_exponent_min", c.kappa_exponent_min);
  c.kappa_exponent_max = r.number("gate.kappa_exponent_max", c.kappa_exponent_max);
  c.front_fraction_min = r.number("gate.front_fraction_min", c.front_fraction_min);

  r.reject_unknown();
  c.validate();
  return c;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

std::string render_config(const ExperimentConfig& c) {
  std::ostringstream os;
  auto num = [](double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return std::string(buf);
  };
  auto list = [&](const auto& values) {
    std::string out;
    for (std::size_t i = 0; i < values.size(); ++i) {
      if (i) out += ", ";
      if constexpr (std::is_same_v<std::decay_t<decltype(values[i])>, int>) {
        out += std::to_string(values[i]);
      } else {
        out += num(values[i]);
      }
    }
    return out;
  };
  os << "study = " << to_string(c.study) << "\n\n[case]\nfamily = " << c.family << "\n";
  const bool radial_study = c.study == StudyKind::verify || c.study == StudyKind::convergence_h ||
                            c.study == StudyKind::convergence_dt;
  if (radial_study) {
    os << "pairs = ";
    for (std::size_t i = 0; i < c.pairs.size(); ++i) {
      os << (i ? ", " : "") << num(c.pairs[i].a) << ":" << num(c.pairs[i].b);
    }
    os << "\n";
  } else {
    os << "a = " << num(c.a) << "\nb = " << num(c.b) << "\n";
  }
  os << "p = " << num(c.params.p) << "\nalpha = " << num(c.params.alpha) << "\neps_reg = " << num(c.params.eps_reg)
     << "\nboundary = " << (c.boundary == BoundaryMode::exact ? "exact" : "homogeneous") << "\n\n";
  os << "[mesh]\nlevels = " << list(c.levels) << "\n\n";
  os << "[time]\nt_end = " << num(c.t_end) << "\ndt = " << list(c.dts) << "\n";
  if (!c.t_values.empty()) os << "t_values = " << list(c.t_values) << "\n";
  if (!c.snapshot_times.empty()) os << "snapshot_times = " << list(c.snapshot_times) << "\n";
  const auto& s = c.solver;
  os << "\n[solver]\nnewton_rel_tol = " << num(s.newton_rel_tol) << "\nnewton_abs_tol = " << num(s.newton_abs_tol)
     << "\nnewton_max_iter = " << s.newton_max_iter << "\nline_search_shrink = " << num(s.line_search_shrink)
     << "\nline_search_max = " << s.line_search_max << "\np_continuation = " << (s.p_continuation ? "true" : "false")
     << "\n\n";
  os << "[output]\ndir = " << c.out_dir.string() << "\ndeterministic = " << (c.deterministic ? "true" : "false")
     << "\nsvg = " << (c.svg ? "true" : "false") << "\n\n";
  os << "[gate]\nslope_min = " << num(c.slope_min) << "\nslope_max = " << num(c.slope_max)
     << "\nmixed_slope_min = " << num(c.mixed_slope_min) << "\nmixed_slope_max = " << num(c.mixed_slope_max)
     << "\nexact_tol = " << num(c.exact_tol) << "\nkappa_ratio_max = " << num(c.kappa_ratio_max)
     << "\nkappa_exponent_min = " << num(c.kappa_exponent_min) << "\nkappa_exponent_max = " << num(c.kappa_exponent_max)
     << "\nfront_fraction_min = " << num(c.front_fraction_min) << "\n";
  return os.str();
}

bool is_multiple(double value, double dt) {
  if (!(dt > 0.0) || !(value > 0.0)) return false;
  const double ratio = value / dt;
  return std::abs(ratio - std::round(ratio)) <= 1e-12 * std::max(1.0, ratio) && std::round(ratio) >= 1.0;
}

void ExperimentConfig::validate() const {
  if (levels.empty()) throw ConfigError("mesh.levels must not be empty");
  if (dts.empty()) throw ConfigError("time.dt must not be empty");
  for (int l : levels) {
    if (l < 0) throw ConfigError("mesh levels must be >= 0");
  }
  if (!(t_end > 0.0)) throw ConfigError("time.t_end must be > 0");
  for (double dt : dts) {
    if (!is_multiple(t_end, dt)) throw ConfigError("time.t_end is not a multiple of dt = " + std::to_string(dt));
  }
  for (double t : t_values) {
    if (!(t <= t_end * (1.0 + 1e-12))) throw ConfigError("time.t_values must not exceed t_end");
    for (double dt : dts) {
      if (!is_multiple(t, dt)) throw ConfigError("time.t_values entry is not a multiple of dt");
    }
  }
  for (double t : snapshot_times) {
    if (!(t <= t_end * (1.0 + 1e-12))) throw ConfigError("time.snapshot_times must not exceed t_end");
    if (!is_multiple(t, dts.front())) throw ConfigError("snapshot time is not a multiple of dt");
  }
  if (study == StudyKind::effectivity_t && t_values.size() < 2) {
    throw ConfigError("effectivity-T needs at least two time.t_values");
  }
  if (study == StudyKind::snapshot && snapshot_times.empty()) {
    throw ConfigError("snapshot study needs time.snapshot_times");
  }
  const bool radial_study = study == StudyKind::verify || study == StudyKind::convergence_h ||
                            study == StudyKind::convergence_dt;
  if (radial_study && family != "radial") throw ConfigError("verify studies need case.family = radial");
  if ((study == StudyKind::effectivity_h || study == StudyKind::effectivity_t) && family != "front") {
    throw ConfigError("effectivity studies need case.family = front");
  }
  if (radial_study && pairs.empty()) throw ConfigError("case.pairs must not be empty");
  try {
    params.validate();
    solver_for(dts.front(), t_end).validate();
    if (radial_study) {
      for (const auto& pair : pairs) make_radial(pair);
    } else {
      make_case();
    }
  } catch (const InvalidArgument& e) {
    throw ConfigError(e.what());
  }
}

ManufacturedCase ExperimentConfig::make_case(double t_end_override) const {
  const double T = t_end_override > 0.0 ? t_end_override : t_end;
  if (family == "front") return ManufacturedCase(MovingFront{a}, params, T);
  return ManufacturedCase(RadialSmooth{a, b}, params, T);
}

ManufacturedCase ExperimentConfig::make_radial(const RadialPair& pair) const {
  return ManufacturedCase(RadialSmooth{pair.a, pair.b}, params, t_end);
}

StepperConfig ExperimentConfig::solver_for(double dt, double t_end_value) const {
  StepperConfig s = solver;
  s.dt = dt;
  s.t_end = t_end_value;
  return s;
}

}  // namespace pcurl::cli
