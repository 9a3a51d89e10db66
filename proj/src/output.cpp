#include "wedgeshock/output.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

#include <unistd.h>

#include "json.hpp"

namespace wedgeshock {

std::string format_double(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

CsvTable::CsvTable(std::vector<std::string> columns) : columns_(std::move(columns)) {
  if (columns_.empty()) throw std::invalid_argument("CsvTable: no columns");
}

CsvTable& CsvTable::row(const std::vector<std::string>& cells) {
  if (cells.size() != columns_.size())
    throw std::invalid_argument("CsvTable::row: expected " + std::to_string(columns_.size()) +
                                " cells, got " + std::to_string(cells.size()));
  rows_.push_back(cells);
  return *this;
}

std::string CsvTable::str() const {
  std::ostringstream os;
  auto line = [&](const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) os << (i ? "," : "") << cells[i];
    os << '\n';
  };
  line(columns_);
  for (const auto& r : rows_) line(r);
  return os.str();
}

std::size_t CsvData::col(const std::string& name) const {
  auto it = std::find(columns.begin(), columns.end(), name);
  if (it == columns.end()) throw IoError("csv: no column '" + name + "'");
  return static_cast<std::size_t>(it - columns.begin());
}

std::vector<double> CsvData::numbers(const std::string& name) const {
  std::size_t c = col(name);
  std::vector<double> out;
  out.reserve(rows.size());
  for (const auto& r : rows) out.push_back(c < r.size() ? std::strtod(r[c].c_str(), nullptr) : NAN);
  return out;
}

CsvData parse_csv(const std::string& text) {
  CsvData d;
  std::istringstream is(text);
  std::string line;
  bool header = true;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    std::vector<std::string> cells;
    std::string cell;
    std::istringstream ls(line);
    while (std::getline(ls, cell, ',')) cells.push_back(cell);
    if (header) {
      d.columns = cells;
      header = false;
    } else {
      d.rows.push_back(cells);
    }
  }
  return d;
}

namespace {

nlohmann::ordered_json vec_json(const Eigen::VectorXd& v) {
  auto a = nlohmann::ordered_json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v(i));
  return a;
}

nlohmann::ordered_json mat_json(const Eigen::MatrixXd& m) {
  auto a = nlohmann::ordered_json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) a.push_back(vec_json(m.row(i).transpose()));
  return a;
}

nlohmann::ordered_json interval_json(const Interval& iv) {
  nlohmann::ordered_json j;
  j["empty"] = iv.empty();
  if (!iv.empty()) {
    j["lo"] = iv.lo;
    j["hi"] = iv.hi;
    j["lo_closed"] = iv.lo_closed;
    j["hi_closed"] = iv.hi_closed;
  }
  return j;
}

}  // namespace

std::string background_json(const BackgroundShock& bg) {
  nlohmann::ordered_json j;
  j["n"] = bg.n;
  j["gamma"] = bg.gamma;
  j["alpha_w_rad"] = bg.alpha_w;
  j["alpha_w_deg"] = bg.alpha_w * 180.0 / M_PI;
  j["q0_minus"] = bg.q0_minus;
  j["u03_minus"] = bg.u03_minus;
  j["q0_plus"] = bg.q0_plus;
  j["omega1"] = bg.omega1;
  j["omega3"] = bg.omega3;
  j["branch"] = to_string(bg.branch);
  j["regime"] = to_string(bg.regime);
  j["transonic"] = bg.transonic;
  j["mach_plus"] = bg.mach_plus;
  j["U_minus"] = vec_json(bg.U_minus);
  j["U_plus"] = vec_json(bg.U_plus);
  j["dphi0"] = vec_json(bg.dphi0);
  j["nu"] = vec_json(bg.nu);
  j["nu1_over_nu2"] = bg.nu(0) / bg.nu(1);
  j["du0"] = vec_json(bg.du0);
  j["A0"] = mat_json(bg.A0);
  j["J0"] = mat_json(bg.J0);
  if (bg.exponents) {
    const auto& e = *bg.exponents;
    j["omega_s"] = e.omega_s;
    j["phi_s"] = e.phi_s;
    j["sigma_s"] = e.sigma_s;
    j["omega_s_tilde"] = e.omega_s_tilde;
    j["phi_s_tilde"] = e.phi_s_tilde;
    j["sigma_s_tilde"] = e.sigma_s_tilde;
    j["psi"] = e.psi;
  }
  if (bg.transforms) {
    j["P"] = mat_json(bg.transforms->P);
    j["P0"] = mat_json(bg.transforms->P0);
  }
  if (bg.transonic) {
    WeightWindow w = admissible_weights(bg, bg.n);
    j["window"]["sigma_inf"] = interval_json(w.sigma_inf);
    j["window"]["sigma0"] = interval_json(w.sigma0);
    j["window"]["empty"] = w.empty();
  }
  j["background_residual"] = background_residual(bg);
  return j.dump(2) + "\n";
}

// ---------------------------------------------------------------------------

namespace {

constexpr double kWidth = 640, kHeight = 440;
constexpr double kLeft = 70, kRight = 150, kTop = 40, kBottom = 55;

std::string esc(const std::string& s) {
  std::string o;
  for (char c : s) {
    if (c == '<') o += "&lt;";
    else if (c == '>') o += "&gt;";
    else if (c == '&') o += "&amp;";
    else o += c;
  }
  return o;
}

std::string num(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", x);
  return buf;
}

std::string tick_label(double v, bool log) {
  char buf[32];
  if (log) std::snprintf(buf, sizeof buf, "1e%d", static_cast<int>(std::lround(v)));
  else std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

}  // namespace

std::string render_svg(const PlotSpec& spec) {
  auto tx = [&](double v) { return spec.log_x ? (v > 0 ? std::log10(v) : NAN) : v; };
  auto ty = [&](double v) { return spec.log_y ? (v > 0 ? std::log10(v) : NAN) : v; };

  double x0 = INFINITY, x1 = -INFINITY, y0 = INFINITY, y1 = -INFINITY;
  auto extend = [&](double x, double y) {
    if (!std::isfinite(x) || !std::isfinite(y)) return;
    x0 = std::min(x0, x);
    x1 = std::max(x1, x);
    y0 = std::min(y0, y);
    y1 = std::max(y1, y);
  };
  for (const auto& s : spec.series)
    for (std::size_t i = 0; i < std::min(s.x.size(), s.y.size()); ++i) extend(tx(s.x[i]), ty(s.y[i]));
  for (const auto& m : spec.markers) extend(tx(m.x), ty(m.y));
  if (!(x0 <= x1) || !(y0 <= y1)) return {};
  if (spec.log_x) { x0 = std::floor(x0); x1 = std::ceil(x1); }
  if (spec.log_y) { y0 = std::floor(y0); y1 = std::ceil(y1); }
  if (x1 - x0 < 1e-300) { x0 -= 0.5; x1 += 0.5; }
  if (y1 - y0 < 1e-300) { y0 -= 0.5; y1 += 0.5; }
  if (!spec.log_x) { double p = 0.05 * (x1 - x0); x0 -= p; x1 += p; }
  if (!spec.log_y) { double p = 0.05 * (y1 - y0); y0 -= p; y1 += p; }

  double pw = kWidth - kLeft - kRight, ph = kHeight - kTop - kBottom;
  if (spec.equal_aspect) {
    double sx = pw / (x1 - x0), sy = ph / (y1 - y0);
    if (sx > sy) { double c = 0.5 * (x0 + x1), hw = 0.5 * pw / sy; x0 = c - hw; x1 = c + hw; }
    else { double c = 0.5 * (y0 + y1), hh = 0.5 * ph / sx; y0 = c - hh; y1 = c + hh; }
  }
  auto px = [&](double v) { return kLeft + (v - x0) / (x1 - x0) * pw; };
  auto py = [&](double v) { return kTop + (y1 - v) / (y1 - y0) * ph; };

  std::ostringstream os;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\"" << kHeight
     << "\" viewBox=\"0 0 " << kWidth << ' ' << kHeight << "\" font-family=\"sans-serif\" font-size=\"11\">\n";
  os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  os << "<text x=\"" << num(kWidth / 2 - kRight / 2) << "\" y=\"22\" text-anchor=\"middle\" font-size=\"14\">"
     << esc(spec.title) << "</text>\n";
  os << "<rect x=\"" << kLeft << "\" y=\"" << kTop << "\" width=\"" << pw << "\" height=\"" << ph
     << "\" fill=\"none\" stroke=\"black\"/>\n";

  auto ticks = [](double a, double b, bool log) {
    std::vector<double> t;
    if (log) {
      int step = std::max(1, static_cast<int>(std::ceil((b - a) / 6)));
      for (double v = std::ceil(a); v <= b + 1e-9; v += step) t.push_back(v);
      return t;
    }
    double raw = (b - a) / 5, mag = std::pow(10.0, std::floor(std::log10(raw)));
    double step = mag * (raw / mag < 2 ? 2 : raw / mag < 5 ? 5 : 10);
    for (double v = std::ceil(a / step) * step; v <= b + 1e-12 * std::abs(b); v += step)
      t.push_back(std::abs(v) < 1e-12 * step ? 0.0 : v);
    return t;
  };
  for (double v : ticks(x0, x1, spec.log_x)) {
    os << "<line x1=\"" << num(px(v)) << "\" y1=\"" << num(kTop + ph) << "\" x2=\"" << num(px(v))
       << "\" y2=\"" << num(kTop + ph + 5) << "\" stroke=\"black\"/>";
    os << "<text x=\"" << num(px(v)) << "\" y=\"" << num(kTop + ph + 18) << "\" text-anchor=\"middle\">"
       << tick_label(v, spec.log_x) << "</text>\n";
  }
  for (double v : ticks(y0, y1, spec.log_y)) {
    os << "<line x1=\"" << num(kLeft - 5) << "\" y1=\"" << num(py(v)) << "\" x2=\"" << kLeft
       << "\" y2=\"" << num(py(v)) << "\" stroke=\"black\"/>";
    os << "<text x=\"" << num(kLeft - 8) << "\" y=\"" << num(py(v) + 4) << "\" text-anchor=\"end\">"
       << tick_label(v, spec.log_y) << "</text>\n";
  }
  os << "<text x=\"" << num(kLeft + pw / 2) << "\" y=\"" << num(kHeight - 12)
     << "\" text-anchor=\"middle\">" << esc(spec.x_label) << "</text>\n";
  os << "<text transform=\"translate(16," << num(kTop + ph / 2) << ") rotate(-90)\" text-anchor=\"middle\">"
     << esc(spec.y_label) << "</text>\n";

  os << "<clipPath id=\"plot\"><rect x=\"" << kLeft << "\" y=\"" << kTop << "\" width=\"" << pw
     << "\" height=\"" << ph << "\"/></clipPath>\n<g clip-path=\"url(#plot)\">\n";
  for (const auto& s : spec.series) {
    os << "<polyline fill=\"none\" stroke=\"" << s.color << "\" stroke-width=\"1.6\""
       << (s.dashed ? " stroke-dasharray=\"6,4\"" : "") << " points=\"";
    for (std::size_t i = 0; i < std::min(s.x.size(), s.y.size()); ++i) {
      double a = tx(s.x[i]), b = ty(s.y[i]);
      if (std::isfinite(a) && std::isfinite(b)) os << num(px(a)) << ',' << num(py(b)) << ' ';
    }
    os << "\"/>\n";
    if (s.markers)
      for (std::size_t i = 0; i < std::min(s.x.size(), s.y.size()); ++i) {
        double a = tx(s.x[i]), b = ty(s.y[i]);
        if (std::isfinite(a) && std::isfinite(b))
          os << "<circle cx=\"" << num(px(a)) << "\" cy=\"" << num(py(b)) << "\" r=\"3\" fill=\""
             << s.color << "\"/>\n";
      }
  }
  for (const auto& a : spec.arrows) {
    double ax = px(tx(a.x)), ay = py(ty(a.y));
    double bx = px(tx(a.x + a.dx)), by = py(ty(a.y + a.dy));
    double ang = std::atan2(by - ay, bx - ax);
    os << "<line x1=\"" << num(ax) << "\" y1=\"" << num(ay) << "\" x2=\"" << num(bx) << "\" y2=\""
       << num(by) << "\" stroke=\"#444\" stroke-width=\"1.2\"/>";
    os << "<polygon fill=\"#444\" points=\"" << num(bx) << ',' << num(by) << ' '
       << num(bx - 8 * std::cos(ang - 0.35)) << ',' << num(by - 8 * std::sin(ang - 0.35)) << ' '
       << num(bx - 8 * std::cos(ang + 0.35)) << ',' << num(by - 8 * std::sin(ang + 0.35)) << "\"/>\n";
  }
  for (const auto& m : spec.markers) {
    double a = px(tx(m.x)), b = py(ty(m.y));
    os << "<circle cx=\"" << num(a) << "\" cy=\"" << num(b) << "\" r=\"4\" fill=\"#d62728\"/>"
       << "<text x=\"" << num(a + 6) << "\" y=\"" << num(b - 6) << "\">" << esc(m.label) << "</text>\n";
  }
  os << "</g>\n";

  double ly = kTop + 10;
  for (const auto& s : spec.series) {
    double lx = kLeft + pw + 12;
    os << "<line x1=\"" << num(lx) << "\" y1=\"" << num(ly) << "\" x2=\"" << num(lx + 22) << "\" y2=\""
       << num(ly) << "\" stroke=\"" << s.color << "\" stroke-width=\"1.6\""
       << (s.dashed ? " stroke-dasharray=\"6,4\"" : "") << "/>";
    os << "<text x=\"" << num(lx + 28) << "\" y=\"" << num(ly + 4) << "\">" << esc(s.name) << "</text>\n";
    ly += 18;
  }
  os << "</svg>\n";
  return os.str();
}

std::string polar_svg(const std::string& polar_csv, double theta_w_rad,
                      const std::vector<PlotMarker>& points, const std::vector<PlotArrow>& normals) {
  CsvData d = parse_csv(polar_csv);
  std::vector<double> v1, v2;
  try {
    v1 = d.numbers("v1");
    v2 = d.numbers("v2");
  } catch (const IoError&) {
    return {};
  }
  if (v1.empty()) return {};
  // closed loop: mirror the upper branch
  PlotSeries loop{"shock polar", {}, {}, "#1f77b4"};
  for (std::size_t i = 0; i < v1.size(); ++i) {
    loop.x.push_back(v1[i]);
    loop.y.push_back(v2[i]);
  }
  for (std::size_t i = v1.size(); i-- > 0;) {
    loop.x.push_back(v1[i]);
    loop.y.push_back(-v2[i]);
  }
  double rmax = *std::max_element(v1.begin(), v1.end());
  PlotSeries ray{"wedge ray", {0.0, rmax * std::cos(theta_w_rad)}, {0.0, rmax * std::sin(theta_w_rad)},
                 "#2ca02c"};
  ray.dashed = true;
  PlotSpec spec;
  spec.title = "Shock polar";
  spec.x_label = "v1";
  spec.y_label = "v2";
  spec.equal_aspect = true;
  spec.series = {loop, ray};
  spec.markers = points;
  spec.arrows = normals;
  return render_svg(spec);
}

std::string convergence_svg(const std::string& csv, const std::string& x_col,
                            const std::string& y_col, bool log_x, const std::string& title) {
  CsvData d = parse_csv(csv);
  PlotSeries s{y_col, {}, {}, "#d62728", true};
  try {
    s.x = d.numbers(x_col);
    s.y = d.numbers(y_col);
  } catch (const IoError&) {
    return {};
  }
  PlotSpec spec;
  spec.title = title;
  spec.x_label = x_col;
  spec.y_label = y_col;
  spec.log_x = log_x;
  spec.log_y = true;
  spec.series = {s};
  return render_svg(spec);
}

std::string front_svg(const std::string& front_csv, double du0_2) {
  CsvData d = parse_csv(front_csv);
  PlotSeries front{"perturbed front", {}, {}, "#d62728"};
  PlotSeries bg{"background front", {}, {}, "#7f7f7f"};
  bg.dashed = true;
  try {
    front.x = d.numbers("x1");
    front.y = d.numbers("x2");
    for (double y2 : d.numbers("y2")) {
      bg.x.push_back(du0_2 * y2);
      bg.y.push_back(y2);
    }
  } catch (const IoError&) {
    return {};
  }
  if (front.x.empty()) return {};
  PlotSpec spec;
  spec.title = "Shock front";
  spec.x_label = "x1";
  spec.y_label = "x2";
  spec.series = {front, bg};
  return render_svg(spec);
}

// ---------------------------------------------------------------------------

void ArtifactSet::add(const std::string& name, std::string content) { files_[name] = std::move(content); }

const std::string& ArtifactSet::get(const std::string& name) const {
  auto it = files_.find(name);
  if (it == files_.end()) throw IoError("artifact '" + name + "' not staged");
  return it->second;
}

void ArtifactSet::commit(const std::filesystem::path& dir) const {
  namespace fs = std::filesystem;
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoError("cannot create output directory '" + dir.string() + "': " + ec.message());
  fs::path staging = dir / (".staging-" + std::to_string(::getpid()));
  fs::remove_all(staging, ec);
  fs::create_directory(staging, ec);
  if (ec) throw IoError("cannot write to output directory '" + dir.string() + "': " + ec.message());
  try {
    for (const auto& [name, content] : files_) {
      std::ofstream os(staging / name, std::ios::binary);
      os << content;
      os.close();
      if (!os) throw IoError("cannot write '" + (staging / name).string() + "'");
    }
    for (const auto& [name, content] : files_) {
      fs::rename(staging / name, dir / name, ec);
      if (ec) throw IoError("cannot move '" + name + "' into place: " + ec.message());
    }
  } catch (...) {
    fs::remove_all(staging, ec);
    throw;
  }
  fs::remove_all(staging, ec);
}

}  // namespace wedgeshock
