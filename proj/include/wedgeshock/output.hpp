// CSV tables, SVG plots and JSON records for the command-line artifacts.
#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "wedgeshock/background.hpp"

namespace wedgeshock {

struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// 17 significant digits, "nan"/"inf" for non-finite values
std::string format_double(double x);

class CsvTable {
 public:
  explicit CsvTable(std::vector<std::string> columns);

  CsvTable& row(const std::vector<std::string>& cells);
  const std::vector<std::string>& columns() const { return columns_; }
  std::size_t rows() const { return rows_.size(); }
  std::string str() const;

 private:
  std::vector<std::string> columns_;
  std::vector<std::vector<std::string>> rows_;
};

struct CsvData {
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;
  // column index by name; throws IoError if absent
  std::size_t col(const std::string& name) const;
  std::vector<double> numbers(const std::string& name) const;
};
CsvData parse_csv(const std::string& text);

// Background as a flat JSON-compatible record.
std::string background_json(const BackgroundShock& bg);

struct PlotSeries {
  std::string name;
  std::vector<double> x;
  std::vector<double> y;
  std::string color = "#1f77b4";
  bool markers = false;
  bool dashed = false;
};
struct PlotMarker {
  std::string label;
  double x = 0.0;
  double y = 0.0;
};
struct PlotArrow {
  double x = 0.0, y = 0.0, dx = 0.0, dy = 0.0;
};
struct PlotSpec {
  std::string title;
  std::string x_label;
  std::string y_label;
  bool log_x = false;
  bool log_y = false;
  bool equal_aspect = false;
  std::vector<PlotSeries> series;
  std::vector<PlotMarker> markers;
  std::vector<PlotArrow> arrows;
};
std::string render_svg(const PlotSpec& spec);

// Plots rebuilt from the CSV text alone. Each returns an empty string when the
// table lacks what the plot needs.
std::string polar_svg(const std::string& polar_csv, double theta_w_rad,
                      const std::vector<PlotMarker>& points, const std::vector<PlotArrow>& normals);
std::string convergence_svg(const std::string& csv, const std::string& x_col,
                            const std::string& y_col, bool log_x, const std::string& title);
// background front x1 = du0_2 y2, x2 = y2 drawn dashed
std::string front_svg(const std::string& front_csv, double du0_2);

// Files staged in memory and committed together: everything goes into a sibling
// temporary directory first, then each file is renamed into place.
class ArtifactSet {
 public:
  void add(const std::string& name, std::string content);
  bool has(const std::string& name) const { return files_.count(name) > 0; }
  const std::string& get(const std::string& name) const;
  const std::map<std::string, std::string>& files() const { return files_; }
  void commit(const std::filesystem::path& dir) const;

 private:
  std::map<std::string, std::string> files_;
};

}  // namespace wedgeshock
