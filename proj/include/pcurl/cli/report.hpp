#pragma once

// Report plumbing: CSV tables, least-squares slopes, minimal SVG output.

#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "pcurl/mesh.hpp"

namespace pcurl::cli {

/// Least-squares fit of log(y) = slope * log(x) + intercept.
struct SlopeFit {
  double slope = 0.0;
  double intercept = 0.0;
  /// Root mean square of the log-space residuals.
  double residual = 0.0;
  int points = 0;
};

/// Empty when fewer than 3 points or any value is not strictly positive.
std::optional<SlopeFit> fit_loglog(std::span<const double> x, std::span<const double> y);

/// %.17g: 17 significant digits, round-trips every double.
std::string format_double(double v);

class CsvTable {
 public:
  explicit CsvTable(std::vector<std::string> header);

  const std::vector<std::string>& header() const { return header_; }
  const std::vector<std::vector<std::string>>& rows() const { return rows_; }
  std::size_t size() const { return rows_.size(); }

  /// Starts a row; the row must be filled with exactly header().size() cells.
  CsvTable& row();
  CsvTable& cell(const std::string& s);
  CsvTable& cell(double v);
  CsvTable& cell(long v);
  CsvTable& cell(int v) { return cell(static_cast<long>(v)); }
  CsvTable& blank() { return cell(std::string{}); }

  std::string str() const;
  /// Throws Error on I/O failure or a short row.
  void write(const std::filesystem::path& path) const;

 private:
  void check_complete() const;

  std::vector<std::string> header_;
  std::vector<std::vector<std::string>> rows_;
};

struct PlotSeries {
  std::string name;
  std::vector<double> x;
  std::vector<double> y;
};

/// Log-log line plot; non-positive points are skipped.
std::string loglog_svg(const std::string& title, const std::string& x_label,
                       const std::vector<PlotSeries>& series);

/// Triangles colored by a per-triangle value (linear grey-to-red scale).
std::string triangle_map_svg(const TriMesh& mesh, std::span<const double> values,
                             const std::string& title);

/// Interior edges drawn with stroke intensity by a per-edge value.
std::string edge_map_svg(const TriMesh& mesh, std::span<const std::int32_t> edges,
                         std::span<const double> values, const std::string& title);

void write_text(const std::filesystem::path& path, const std::string& text);

}  // namespace pcurl::cli
