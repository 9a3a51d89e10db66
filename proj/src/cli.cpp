#include "wedgeshock/cli.hpp"

#include <cmath>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "wedgeshock/background.hpp"
#include "wedgeshock/elliptic.hpp"
#include "wedgeshock/iterate.hpp"
#include "wedgeshock/shock_polar.hpp"
#include "wedgeshock/spectrum.hpp"

namespace wedgeshock {

namespace {

const std::vector<std::string> kCommands = {"polar", "background", "spectrum", "solve", "iterate", "study"};

std::string trim(const std::string& s) {
  auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return {};
  auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

double parse_number(const std::string& key, const std::string& v) {
  std::string s = trim(v);
  char* end = nullptr;
  double x = std::strtod(s.c_str(), &end);
  if (s.empty() || end != s.c_str() + s.size() || !std::isfinite(x))
    throw ConfigError(key + ": expected a finite number, got '" + s + "'");
  return x;
}

int parse_int(const std::string& key, const std::string& v) {
  double x = parse_number(key, v);
  if (x != std::floor(x) || std::abs(x) > 1e9) throw ConfigError(key + ": expected an integer, got '" + trim(v) + "'");
  return static_cast<int>(x);
}

std::string unquote(const std::string& v) {
  std::string s = trim(v);
  if (s.size() >= 2 && (s.front() == '"' || s.front() == '\'') && s.back() == s.front())
    return s.substr(1, s.size() - 2);
  return s;
}

void assign(RunConfig& c, const std::string& key, const std::string& value) {
  if (key == "command") c.command = unquote(value);
  else if (key == "gamma") c.gamma = parse_number(key, value);
  else if (key == "q0_minus") c.q0_minus = parse_number(key, value);
  else if (key == "alpha_w_deg") c.alpha_w_deg = parse_number(key, value);
  else if (key == "u03_minus") c.u03_minus = parse_number(key, value);
  else if (key == "branch") c.branch = unquote(value);
  else if (key == "n") c.n = parse_int(key, value);
  else if (key == "grid.t_min") c.grid.t_min = parse_number(key, value);
  else if (key == "grid.t_max") c.grid.t_max = parse_number(key, value);
  else if (key == "grid.n_t") c.grid.n_t = parse_int(key, value);
  else if (key == "grid.n_omega") c.grid.n_omega = parse_int(key, value);
  else if (key == "delta") c.delta = parse_number(key, value);
  else if (key == "sigma0") c.sigma0 = parse_number(key, value);
  else if (key == "sigma_inf") c.sigma_inf = parse_number(key, value);
  else if (key == "alpha_holder") c.alpha_holder = parse_number(key, value);
  else if (key == "max_iter") c.max_iter = parse_int(key, value);
  else if (key == "tol") c.tol = parse_number(key, value);
  else if (key == "output_dir") c.output_dir = unquote(value);
  else if (key == "polar_samples") c.polar_samples = parse_int(key, value);
  else if (key == "levels") c.levels = parse_int(key, value);
  else if (key == "deltas") {
    c.deltas.clear();
    std::string s = trim(value);
    if (!s.empty() && s.front() == '[' && s.back() == ']') s = s.substr(1, s.size() - 2);
    std::istringstream is(s);
    std::string item;
    int k = 0;
    while (std::getline(is, item, ','))
      if (!trim(item).empty()) c.deltas.push_back(parse_number("deltas[" + std::to_string(k++) + "]", item));
  } else {
    throw ConfigError(key + ": unknown key");
  }
}

void flatten(const nlohmann::json& j, const std::string& prefix,
             std::vector<std::pair<std::string, std::string>>& out) {
  for (auto it = j.begin(); it != j.end(); ++it) {
    std::string key = prefix.empty() ? it.key() : prefix + "." + it.key();
    const auto& v = it.value();
    if (v.is_object()) {
      flatten(v, key, out);
    } else if (v.is_array()) {
      std::string s;
      for (std::size_t i = 0; i < v.size(); ++i) {
        if (!v[i].is_number()) throw ConfigError(key + "[" + std::to_string(i) + "]: expected a number");
        s += (i ? "," : "") + v[i].dump();
      }
      out.emplace_back(key, s);
    } else if (v.is_string()) {
      out.emplace_back(key, v.get<std::string>());
    } else if (v.is_null()) {
      throw ConfigError(key + ": null value");
    } else {
      out.emplace_back(key, v.dump());
    }
  }
}

}  // namespace

RunConfig parse_config(const std::string& text) {
  RunConfig c;
  std::string body = trim(text);
  if (!body.empty() && body.front() == '{') {
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(body);
    } catch (const nlohmann::json::exception& e) {
      throw ConfigError(std::string("config: invalid JSON: ") + e.what());
    }
    std::vector<std::pair<std::string, std::string>> kv;
    flatten(j, "", kv);
    for (const auto& [k, v] : kv) assign(c, k, v);
    return c;
  }
  std::istringstream is(text);
  std::string line;
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("line " + std::to_string(lineno) + ": expected key = value");
    std::string key = trim(line.substr(0, eq));
    if (key.empty()) throw ConfigError("line " + std::to_string(lineno) + ": empty key");
    assign(c, key, line.substr(eq + 1));
  }
  return c;
}

RunConfig load_config(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw IoError("cannot read config file '" + path + "'");
  std::ostringstream ss;
  ss << is.rdbuf();
  return parse_config(ss.str());
}

namespace {

int effective_n(const RunConfig& c) { return c.n == 0 ? (c.u03_minus == 0.0 ? 2 : 3) : c.n; }

Branch parsed_branch(const RunConfig& c) { return branch_from_string(c.branch); }

BackgroundShock make_background(const RunConfig& c) {
  return solve_background(c.gamma, c.q0_minus, c.alpha_w_deg * M_PI / 180.0, c.u03_minus,
                          parsed_branch(c), effective_n(c));
}

IterationConfig make_config(const RunConfig& c, const BackgroundShock& bg, double delta) {
  IterationConfig ic = make_iteration_config(bg, delta, c.alpha_holder);
  if (c.sigma0 || c.sigma_inf) {
    double s0 = c.sigma0.value_or(ic.spec.sigma0());
    double sinf = c.sigma_inf.value_or(ic.spec.sigma_inf());
    ic.spec = WeightSpec::from_sigma(2, c.alpha_holder, s0, sinf);
    ic.pert = perturbation_for_delta(delta, ic.spec, 2);
  }
  ic.max_iter = c.max_iter;
  ic.tol = c.tol;
  ic.t_min = c.grid.t_min;
  ic.t_max = c.grid.t_max;
  ic.n_t = c.grid.n_t;
  ic.n_omega = c.grid.n_omega;
  return ic;
}

void require(bool ok, const std::string& field, const std::string& what) {
  if (!ok) throw ConfigError(field + ": " + what);
}

}  // namespace

void validate_config(const RunConfig& c) {
  require(std::find(kCommands.begin(), kCommands.end(), c.command) != kCommands.end(), "command",
          c.command.empty() ? "missing (one of polar, background, spectrum, solve, iterate, study)"
                            : "unknown command '" + c.command + "'");
  require(c.gamma > 1.0, "gamma", "must exceed 1");
  GasModel gas(c.gamma);
  require(c.q0_minus > 0.0 && c.q0_minus < gas.q_max(), "q0_minus",
          "must lie in (0, q_max) = (0, " + format_double(gas.q_max()) + ")");
  require(c.u03_minus * c.u03_minus + c.q0_minus * c.q0_minus < gas.q_max_sq(), "u03_minus",
          "upstream speed exceeds q_max");
  require(c.alpha_w_deg > 0.0 && c.alpha_w_deg < 90.0, "alpha_w_deg", "must lie in (0, 90)");
  require(c.branch == "weak" || c.branch == "strong", "branch", "must be 'weak' or 'strong'");
  require(c.n == 0 || (c.n >= 2 && c.n <= 6), "n", "must be 0 (auto) or in 2..6");
  require(!(c.n == 2 && c.u03_minus != 0.0), "u03_minus", "must be 0 when n = 2");
  require(c.grid.t_max > c.grid.t_min, "grid.t_max", "must exceed grid.t_min");
  require(c.grid.n_t >= 8, "grid.n_t", "must be >= 8");
  require(c.grid.n_omega >= 8, "grid.n_omega", "must be >= 8");
  require(c.delta >= 0.0, "delta", "must be >= 0");
  require(c.alpha_holder > 0.0 && c.alpha_holder < 1.0, "alpha_holder", "must lie in (0, 1)");
  require(c.max_iter >= 1, "max_iter", "must be >= 1");
  require(c.tol > 0.0, "tol", "must be positive");
  require(!c.output_dir.empty(), "output_dir", "must not be empty");
  require(c.polar_samples >= 2, "polar_samples", "must be >= 2");
  require(c.levels >= 2 && c.levels <= 5, "levels", "must lie in 2..5");
  for (std::size_t i = 0; i < c.deltas.size(); ++i)
    require(c.deltas[i] >= 0.0, "deltas[" + std::to_string(i) + "]", "must be >= 0");

  if (c.command == "polar") {
    require(c.q0_minus > gas.q_cr(), "q0_minus",
            "upstream flow must be supersonic (q0_minus > " + format_double(gas.q_cr()) + ")");
    return;
  }

  BackgroundShock bg;
  try {
    bg = make_background(c);
  } catch (const DetachedWedge& e) {
    throw ConfigError(std::string("alpha_w_deg: ") + e.what());
  } catch (const std::exception& e) {
    throw ConfigError(std::string("q0_minus: ") + e.what());
  }
  if (c.command == "background") return;

  require(bg.transonic, "alpha_w_deg",
          "the " + c.branch + " solution at this angle is not transonic (" + to_string(bg.regime) + ")");
  if (c.command == "spectrum") return;

  if (c.command == "solve") {
    require(bg.n == 2, "n", "solve uses the planar problem (n = 2)");
    return;
  }
  // iterate, study
  require(bg.n == 2, "n", "nonlinear iteration is planar (n = 2)");
  try {
    make_config(c, bg, c.delta).validate();
  } catch (const std::exception& e) {
    std::string field = c.sigma0 || c.sigma_inf ? "sigma0/sigma_inf" : "grid";
    throw ConfigError(field + ": " + e.what());
  }
}

// ---------------------------------------------------------------------------

namespace {

std::string fmt(double x) { return format_double(x); }

void add_plot(RunResult& r, bool plots, const std::string& name, const std::function<std::string()>& make) {
  if (!plots) return;
  try {
    std::string svg = make();
    if (!svg.empty()) r.artifacts.add(name, std::move(svg));
  } catch (const std::exception&) {
    // plots are optional
  }
}

void run_polar(const RunConfig& c, RunResult& r, bool plots) {
  GasModel gas(c.gamma);
  int n = effective_n(c);
  ShockPolar polar(gas, c.q0_minus, c.u03_minus, n);
  CsvTable t({"v1", "v2", "q", "rho", "regime"});
  for (const PolarPoint& p : polar.sample(c.polar_samples))
    t.row({fmt(p.v1), fmt(p.v2), fmt(p.q), fmt(p.rho), to_string(polar.classify(p))});
  std::string csv = t.str();
  r.artifacts.add("polar.csv", csv);
  add_plot(r, plots, "polar.svg", [&] {
    double theta = c.alpha_w_deg * M_PI / 180.0;
    std::vector<PlotMarker> marks;
    std::vector<PlotArrow> arrows;
    PolarPoint s = polar.point(polar.critical_v1());
    marks.push_back({"S*", s.v1, s.v2});
    WedgeSolutions ws = polar.wedge_solutions(theta);
    if (!ws.detached) {
      for (const auto& [label, p] : {std::pair{"A", ws.strong}, std::pair{"B", ws.weak}}) {
        marks.push_back({label, p.v1, p.v2});
        Eigen::VectorXd nu = polar_normal(gas, polar.downstream(p), polar.upstream());
        double len = 0.12 * c.q0_minus / nu.head(2).norm();
        arrows.push_back({p.v1, p.v2, len * nu(0), len * nu(1)});
      }
    }
    return polar_svg(csv, theta, marks, arrows);
  });
}

void run_background(const RunConfig& c, RunResult& r) {
  r.artifacts.add("background.json", background_json(make_background(c)));
}

void run_spectrum(const RunConfig& c, RunResult& r) {
  BackgroundShock bg = make_background(c);
  ObliqueAngularProblem p = bg.n == 2 ? planar_problem(bg) : skew_problem(bg);
  double gap = M_PI / p.omega_star;
  CsvTable t({"m", "lambda_formula", "lambda_determinant", "abs_diff"});
  for (int m = -3; m <= 3; ++m) {
    double lf = p.lambda(m);
    EigenSet zs = eigenvalues_in(p, Interval::closed(lf - 0.4 * gap, lf + 0.4 * gap), "determinant");
    double ld = NAN;
    for (double z : zs.values)
      if (std::isnan(ld) || std::abs(z - lf) < std::abs(ld - lf)) ld = z;
    t.row({std::to_string(m), fmt(lf), fmt(ld), fmt(std::abs(ld - lf))});
  }
  r.artifacts.add("spectrum.csv", t.str());
}

void run_solve(const RunConfig& c, RunResult& r, bool plots) {
  BackgroundShock bg = make_background(c);
  ObliqueAngularProblem p = planar_problem(bg);
  StripGrid g{c.grid.t_min, c.grid.t_max, c.grid.n_t, c.grid.n_omega, 0.0, p.omega_star};
  CsvTable t({"h", "max_error", "order_estimate"});
  for (const ConvergenceRow& row : convergence_study(p, g, c.levels))
    t.row({fmt(row.h), fmt(row.max_error), fmt(row.order_estimate)});
  std::string csv = t.str();
  r.artifacts.add("convergence.csv", csv);
  add_plot(r, plots, "convergence.svg",
           [&] { return convergence_svg(csv, "h", "max_error", true, "Manufactured-solution error"); });
}

void run_iterate(const RunConfig& c, RunResult& r, bool plots) {
  BackgroundShock bg = make_background(c);
  IterationConfig ic = make_config(c, bg, c.delta);
  IterationReport rep = bg.branch == Branch::strong ? strong_branch_2d_run(ic, 2) : run_iteration(ic);
  CsvTable t({"k", "norm_udot", "diff_norm", "ratio", "converged"});
  for (std::size_t k = 0; k < rep.norms.size(); ++k) {
    double ratio = k >= 1 && k - 1 < rep.ratios.size() ? rep.ratios[k - 1] : NAN;
    bool last = k + 1 == rep.norms.size();
    t.row({std::to_string(k + 1), fmt(rep.norms[k]), fmt(rep.diffs[k]), fmt(ratio),
           last && rep.converged ? "true" : "false"});
  }
  std::string csv = t.str();
  r.artifacts.add("iteration.csv", csv);
  CsvTable f({"y2", "x1", "x2"});
  for (const FrontSample& s : rep.front) f.row({fmt(s.y2), fmt(s.x1), fmt(s.x2)});
  std::string fcsv = f.str();
  r.artifacts.add("front.csv", fcsv);
  add_plot(r, plots, "iteration.svg",
           [&] { return convergence_svg(csv, "k", "diff_norm", false, "Picard convergence"); });
  add_plot(r, plots, "front.svg", [&] { return front_svg(fcsv, bg.du0(1)); });
  if (!rep.converged) {
    r.status = exit_numerical;
    r.message = "iteration did not converge" + (rep.message.empty() ? std::string() : ": " + rep.message);
  }
}

void run_study(const RunConfig& c, RunResult& r, bool plots) {
  BackgroundShock bg = make_background(c);
  IterationConfig ic = make_config(c, bg, c.delta);
  std::vector<double> deltas = c.deltas;
  if (deltas.empty()) {
    double d0 = find_delta0(ic);
    deltas = {d0, d0 / 2, d0 / 4};
  }
  CsvTable t({"delta", "K_hat", "final_ratio", "converged"});
  bool all = true;
  for (const StudyRow& row : scaling_study(ic, deltas)) {
    t.row({fmt(row.delta), fmt(row.K_hat), fmt(row.final_ratio), row.converged ? "true" : "false"});
    all = all && row.converged;
  }
  std::string csv = t.str();
  r.artifacts.add("study.csv", csv);
  add_plot(r, plots, "study.svg", [&] { return convergence_svg(csv, "delta", "final_ratio", true, "Contraction ratio"); });
  if (!all) {
    r.status = exit_numerical;
    r.message = "some study runs did not converge";
  }
}

}  // namespace

RunResult execute(const RunConfig& c, bool plots) {
  validate_config(c);
  RunResult r;
  if (c.command == "polar") run_polar(c, r, plots);
  else if (c.command == "background") run_background(c, r);
  else if (c.command == "spectrum") run_spectrum(c, r);
  else if (c.command == "solve") run_solve(c, r, plots);
  else if (c.command == "iterate") run_iterate(c, r, plots);
  else if (c.command == "study") run_study(c, r, plots);
  return r;
}

int run_cli(int argc, char** argv) {
  CLI::App app{"Numerical laboratory for transonic wedge shocks"};
  std::string command, config_path, out_dir;
  bool no_plots = false;
  app.add_option("command", command, "polar, background, spectrum, solve, iterate or study");
  app.add_option("--config", config_path, "configuration file (key = value or JSON)");
  app.add_option("--out", out_dir, "output directory (overrides output_dir)");
  app.add_flag("--no-plots", no_plots, "skip SVG output");
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? exit_ok : exit_config;
  }

  RunConfig c;
  try {
    if (!config_path.empty()) c = load_config(config_path);
    if (!command.empty()) c.command = command;
    if (!out_dir.empty()) c.output_dir = out_dir;
    validate_config(c);
  } catch (const ConfigError& e) {
    std::cerr << "wedgeshock: config error: " << e.what() << "\n";
    return exit_config;
  } catch (const IoError& e) {
    std::cerr << "wedgeshock: " << e.what() << "\n";
    return exit_io;
  }

  RunResult r;
  try {
    r = execute(c, !no_plots);
  } catch (const ConfigError& e) {
    std::cerr << "wedgeshock: config error: " << e.what() << "\n";
    return exit_config;
  } catch (const std::exception& e) {
    std::cerr << "wedgeshock: " << c.command << ": numerical failure: " << e.what() << "\n";
    return exit_numerical;
  }

  try {
    r.artifacts.commit(c.output_dir);
  } catch (const std::exception& e) {
    std::cerr << "wedgeshock: " << e.what() << "\n";
    return exit_io;
  }
  for (const auto& [name, content] : r.artifacts.files()) std::cout << c.output_dir << "/" << name << "\n";
  if (r.status != exit_ok) std::cerr << "wedgeshock: " << c.command << ": " << r.message << "\n";
  return r.status;
}

}  // namespace wedgeshock
