#include "pcurl/cli/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

#include "pcurl/error.hpp"

namespace pcurl::cli {

std::optional<SlopeFit> fit_loglog(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw ContractViolation("fit_loglog: size mismatch");
  if (x.size() < 3) return std::nullopt;
  const auto n = static_cast<double>(x.size());
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!(x[i] > 0.0) || !(y[i] > 0.0)) return std::nullopt;
    const double lx = std::log(x[i]);
    const double ly = std::log(y[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  const double denom = n * sxx - sx * sx;
  if (!(std::abs(denom) > 0.0)) return std::nullopt;
  SlopeFit fit;
  fit.slope = (n * sxy - sx * sy) / denom;
  fit.intercept = (sy - fit.slope * sx) / n;
  double ss = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double r = std::log(y[i]) - (fit.slope * std::log(x[i]) + fit.intercept);
    ss += r * r;
  }
  fit.residual = std::sqrt(ss / n);
  fit.points = static_cast<int>(x.size());
  return fit;
}

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

CsvTable::CsvTable(std::vector<std::string> header) : header_(std::move(header)) {}

CsvTable& CsvTable::row() {
  if (!rows_.empty()) check_complete();
  rows_.emplace_back();
  return *this;
}

CsvTable& CsvTable::cell(const std::string& s) {
  if (rows_.empty()) throw ContractViolation("CsvTable: cell before row()");
  if (rows_.back().size() == header_.size()) throw ContractViolation("CsvTable: row too long");
  if (s.find_first_of(",\"\n") != std::string::npos) {
    std::string quoted = "\"";
    for (char ch : s) {
      if (ch == '"') quoted += '"';
      quoted += ch;
    }
    rows_.back().push_back(quoted + "\"");
  } else {
    rows_.back().push_back(s);
  }
  return *this;
}

CsvTable& CsvTable::cell(double v) { return cell(format_double(v)); }

CsvTable& CsvTable::cell(long v) { return cell(std::to_string(v)); }

void CsvTable::check_complete() const {
  if (!rows_.empty() && rows_.back().size() != header_.size()) {
    throw ContractViolation("CsvTable: row has " + std::to_string(rows_.back().size()) + " cells, expected " +
                            std::to_string(header_.size()));
  }
}

std::string CsvTable::str() const {
  check_complete();
  std::ostringstream os;
  auto line = [&](const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) os << (i ? "," : "") << cells[i];
    os << '\n';
  };
  line(header_);
  for (const auto& r : rows_) line(r);
  return os.str();
}

void CsvTable::write(const std::filesystem::path& path) const { write_text(path, str()); }

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path.string());
  out << text;
  if (!out) throw Error("write failed: " + path.string());
}

namespace {

constexpr double kWidth = 640.0;
constexpr double kHeight = 480.0;
constexpr double kMargin = 60.0;

const char* const kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"};

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3f", v);
  return buf;
}

std::string heat_color(double v, double lo, double hi) {
  const double s = hi > lo ? std::clamp((v - lo) / (hi - lo), 0.0, 1.0) : 0.0;
  const int r = static_cast<int>(std::lround(230 + 25 * s));
  const int g = static_cast<int>(std::lround(230 * (1 - s)));
  const int b = static_cast<int>(std::lround(230 * (1 - s)));
  char buf[16];
  std::snprintf(buf, sizeof buf, "#%02x%02x%02x", r, g, b);
  return buf;
}

// Unit disk to pixel coordinates.
struct DiskFrame {
  double scale = (kHeight - 2 * kMargin) / 2.0;
  double cx = kWidth / 2.0;
  double cy = kHeight / 2.0;
  double x(double v) const { return cx + scale * v; }
  double y(double v) const { return cy - scale * v; }
};

std::string svg_open(const std::string& title) {
  std::ostringstream os;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\"" << kHeight
     << "\" viewBox=\"0 0 " << kWidth << ' ' << kHeight << "\">\n"
     << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
     << "<text x=\"" << kWidth / 2 << "\" y=\"24\" text-anchor=\"middle\" font-family=\"sans-serif\" "
        "font-size=\"16\">"
     << title << "</text>\n";
  return os.str();
}

}  // namespace

std::string loglog_svg(const std::string& title, const std::string& x_label,
                       const std::vector<PlotSeries>& series) {
  double xmin = std::numeric_limits<double>::infinity(), xmax = -xmin;
  double ymin = xmin, ymax = -xmin;
  for (const auto& s : series) {
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      if (!(s.x[i] > 0.0) || !(s.y[i] > 0.0)) continue;
      xmin = std::min(xmin, std::log10(s.x[i]));
      xmax = std::max(xmax, std::log10(s.x[i]));
      ymin = std::min(ymin, std::log10(s.y[i]));
      ymax = std::max(ymax, std::log10(s.y[i]));
    }
  }
  std::ostringstream os;
  os << svg_open(title);
  if (!std::isfinite(xmin)) {
    os << "</svg>\n";
    return os.str();
  }
  if (xmax - xmin < 1e-12) xmax = xmin + 1.0;
  if (ymax - ymin < 1e-12) ymax = ymin + 1.0;
  auto px = [&](double lx) { return kMargin + (lx - xmin) / (xmax - xmin) * (kWidth - 2 * kMargin); };
  auto py = [&](double ly) { return kHeight - kMargin - (ly - ymin) / (ymax - ymin) * (kHeight - 2 * kMargin); };
  os << "<rect x=\"" << kMargin << "\" y=\"" << kMargin << "\" width=\"" << kWidth - 2 * kMargin
     << "\" height=\"" << kHeight - 2 * kMargin << "\" fill=\"none\" stroke=\"black\"/>\n";
  os << "<text x=\"" << kWidth / 2 << "\" y=\"" << kHeight - 15 << "\" text-anchor=\"middle\" "
     << "font-family=\"sans-serif\" font-size=\"12\">log10 " << x_label << "  [" << fmt(xmin) << ", "
     << fmt(xmax) << "]</text>\n";
  os << "<text x=\"15\" y=\"" << kHeight / 2 << "\" font-family=\"sans-serif\" font-size=\"12\" "
     << "transform=\"rotate(-90 15 " << kHeight / 2 << ")\">log10 value  [" << fmt(ymin) << ", " << fmt(ymax)
     << "]</text>\n";
  for (std::size_t k = 0; k < series.size(); ++k) {
    const auto& s = series[k];
    const char* color = kPalette[k % std::size(kPalette)];
    os << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"2\" points=\"";
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      if (!(s.x[i] > 0.0) || !(s.y[i] > 0.0)) continue;
      os << fmt(px(std::log10(s.x[i]))) << ',' << fmt(py(std::log10(s.y[i]))) << ' ';
    }
    os << "\"/>\n";
    os << "<text x=\"" << kMargin + 10 << "\" y=\"" << kMargin + 18 * (k + 1) << "\" fill=\"" << color
       << "\" font-family=\"sans-serif\" font-size=\"12\">" << s.name << "</text>\n";
  }
  os << "</svg>\n";
  return os.str();
}

std::string triangle_map_svg(const TriMesh& mesh, std::span<const double> values, const std::string& title) {
  if (values.size() != mesh.num_triangles()) throw ContractViolation("triangle_map_svg: size mismatch");
  double lo = 0.0, hi = 0.0;
  if (!values.empty()) {
    lo = *std::min_element(values.begin(), values.end());
    hi = *std::max_element(values.begin(), values.end());
  }
  const DiskFrame f;
  std::ostringstream os;
  os << svg_open(title);
  for (std::size_t t = 0; t < mesh.num_triangles(); ++t) {
    const auto& tri = mesh.triangle(t);
    os << "<polygon points=\"";
    for (auto v : tri) os << fmt(f.x(mesh.vertex(v).x)) << ',' << fmt(f.y(mesh.vertex(v).y)) << ' ';
    os << "\" fill=\"" << heat_color(values[t], lo, hi) << "\" stroke=\"#999\" stroke-width=\"0.2\"/>\n";
  }
  os << "</svg>\n";
  return os.str();
}

std::string edge_map_svg(const TriMesh& mesh, std::span<const std::int32_t> edges,
                         std::span<const double> values, const std::string& title) {
  if (values.size() != edges.size()) throw ContractViolation("edge_map_svg: size mismatch");
  double hi = 0.0;
  for (double v : values) hi = std::max(hi, v);
  const DiskFrame f;
  std::ostringstream os;
  os << svg_open(title);
  for (std::size_t k = 0; k < edges.size(); ++k) {
    const auto& e = mesh.edge(static_cast<std::size_t>(edges[k]));
    const Vec2 a = mesh.vertex(e[0]);
    const Vec2 b = mesh.vertex(e[1]);
    os << "<line x1=\"" << fmt(f.x(a.x)) << "\" y1=\"" << fmt(f.y(a.y)) << "\" x2=\"" << fmt(f.x(b.x))
       << "\" y2=\"" << fmt(f.y(b.y)) << "\" stroke=\"" << heat_color(values[k], 0.0, hi)
       << "\" stroke-width=\"1.5\"/>\n";
  }
  os << "</svg>\n";
  return os.str();
}

}  // namespace pcurl::cli
