#include "wedgeshock/iterate.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <limits>

namespace wedgeshock {

StripGrid IterationConfig::grid() const {
  StripGrid g;
  g.t_min = t_min;
  g.t_max = t_max;
  g.n_t = n_t;
  g.n_omega = n_omega;
  g.omega_minus = 0.0;
  g.omega_plus = bg.exponents ? bg.exponents->omega_s : stability_exponents(bg).omega_s;
  return g;
}

void IterationConfig::validate() const {
  if (bg.n != 2) throw std::invalid_argument("IterationConfig: nonlinear runs are planar (n = 2)");
  if (!bg.transonic) throw DegenerateEllipticity("IterationConfig: background is not transonic");
  if (max_iter < 1) throw std::invalid_argument("IterationConfig: max_iter must be >= 1");
  if (!(tol > 0.0)) throw std::invalid_argument("IterationConfig: tol must be positive");
  spec.validate();
  WeightWindow w = admissible_weights(bg, 2);
  if (!w.contains(spec.sigma_inf(), spec.sigma0()))
    throw std::invalid_argument("IterationConfig: (sigma_inf, sigma0) = (" +
                                std::to_string(spec.sigma_inf()) + ", " + std::to_string(spec.sigma0()) +
                                ") outside the admissible window");
  grid().validate();
}

double template_norm(const WeightSpec& spec) {
  WedgePerturbation unit;
  unit.amplitude = 1.0;
  return weighted_holder_norm_1d(
      [&](double x, int k) { return k == 0 ? unit.value(x) : (k == 1 ? unit.d1(x) : unit.d2(x)); }, spec);
}

WedgePerturbation perturbation_for_delta(double delta, const WeightSpec& spec, int n) {
  if (!(delta >= 0.0)) throw std::invalid_argument("perturbation_for_delta: delta must be >= 0");
  WedgePerturbation p;
  p.n = n;
  p.delta = delta;
  p.amplitude = delta / template_norm(spec);
  p.sigma0 = spec.sigma0();
  p.sigma_inf = spec.sigma_inf();
  return p;
}

IterationConfig make_iteration_config(const BackgroundShock& bg, double delta, double alpha) {
  IterationConfig c;
  c.bg = bg;
  StabilityExponents e = stability_exponents(bg);
  double s0, sinf;
  if (bg.branch == Branch::weak) {
    s0 = 0.5 * e.sigma_s;
    sinf = -0.5;
  } else {
    s0 = 0.5 * std::min(1.0, M_PI / e.omega_s + e.sigma_s);
    sinf = 0.5 * std::max(-1.0, e.sigma_s);
  }
  c.spec = WeightSpec::from_sigma(2, alpha, s0, sinf);
  c.pert = perturbation_for_delta(delta, c.spec, 2);
  return c;
}

// ---------------------------------------------------------------------------

PicardScheme::PicardScheme(const IterationConfig& config) : config_(config) {
  config_.validate();
  const BackgroundShock& bg = config_.bg;
  grid_ = config_.grid();
  problem_ = planar_problem(bg);
  P_ = canonical_transforms(bg).P;
  Pinv_ = P_.inverse();

  Eigen::Vector2d shock_dir = P_.col(1);
  double ws = std::atan2(shock_dir(1), shock_dir(0));
  if (std::abs(ws - problem_.omega_star) > 1e-9)
    throw std::logic_error("PicardScheme: transformed shock ray disagrees with omega_s");
  if (std::abs(P_(1, 0)) > 1e-12 || P_(0, 0) <= 0.0)
    throw std::logic_error("PicardScheme: transformed wedge ray is not w = 0");

  LinearizedBoundary lb = linearized_boundary(bg);
  Eigen::Vector2d B1 = P_ * lb.b1, B2 = P_ * lb.b2;
  a_omega_wedge_ = B1(1);
  alpha_minus_rows_ = B1(0) / a_omega_wedge_;
  double c = std::cos(ws), s = std::sin(ws);
  a_omega_shock_ = -B2(0) * s + B2(1) * c;
  alpha_plus_rows_ = -(B2(0) * c + B2(1) * s) / a_omega_shock_;
  if (std::abs(alpha_minus_rows_ - problem_.alpha_minus) > 1e-8 ||
      std::abs(alpha_plus_rows_ - problem_.alpha_plus) > 1e-8)
    throw std::logic_error("PicardScheme: linearized boundary rows disagree with the angular problem");

  SectorSystem<double> sys;
  sys.grid = grid_;
  sys.alpha_plus = problem_.alpha_plus;
  sys.alpha_minus = problem_.alpha_minus;
  auto ends = asymptotic_ends(problem_, 1.0 + config_.spec.sigma0(), 1.0 + config_.spec.sigma_inf());
  sys.corner = ends.first;
  sys.far = ends.second;
  bool exclude = config_.exclude_mode.value_or(bg.branch == Branch::strong);
  if (exclude) {
    double l0 = problem_.lambda(0);
    auto lam = eigenvalues_in(problem_, Interval::closed(l0 - M_PI / problem_.omega_star - 1.0, l0)).values;
    auto it = std::lower_bound(lam.begin(), lam.end(), l0 - 1e-9);
    if (it == lam.begin()) throw std::logic_error("PicardScheme: no eigenvalue below lambda_0");
    sys.far = EndCondition::exponent(*(it - 1));
    exclude_ = l0;
  }
  solver_ = std::make_shared<SectorSolver<double>>(sys);
  if (exclude_) {
    double l0 = *exclude_;
    AngularMode v = eigenfunction(problem_, l0);
    double wmid = 0.5 * problem_.omega_star;
    Eigen::VectorXd far(grid_.n_omega);
    for (int j = 0; j < grid_.n_omega; ++j)
      far(j) = (sys.far.a + sys.far.b * l0) * std::exp(l0 * grid_.t_max) * v.value(grid_.omega(j) - wmid);
    Eigen::VectorXd zt = Eigen::VectorXd::Zero(grid_.n_t), zw = Eigen::VectorXd::Zero(grid_.n_omega);
    mode_ = GridField(grid_, "lambda0 mode");
    mode_.values = solver_->solve(Eigen::MatrixXd::Zero(grid_.n_t, grid_.n_omega), zt, zt, zw, far);
    mode_functional_ = contour_functional(problem_, mode_, l0, 2);
  }
}

PicardScheme::Local PicardScheme::local(const GridField& v_dot, int i, int j) const {
  StripJet jet = strip_jet(v_dot, i, j);
  Local L;
  Eigen::Vector2d Y = v_dot.point(i, j);
  L.y = Pinv_ * Y;
  const BackgroundShock& bg = config_.bg;
  L.v = bg.du0(0) * L.y(0) + bg.du0(1) * L.y(1) + jet.u;
  L.dv = bg.du0 + P_.transpose() * jet.gradient();
  L.d2v = P_.transpose() * jet.hessian() * P_;
  return L;
}

GridField PicardScheme::correction(const GridField& v_dot) const {
  const StripGrid& g = grid_;
  if (v_dot.grid.n_t != g.n_t || v_dot.grid.n_omega != g.n_omega)
    throw std::invalid_argument("picard_step: field does not live on the scheme grid");
  const BackgroundShock& bg = config_.bg;
  const WedgePerturbation& pert = config_.pert;
  GasModel gas = bg.gas();
  const double u01 = bg.du0(0);

  // rows of A (u - v) = -N(v); the end rows keep u on the homogeneous end conditions
  Eigen::VectorXd vv(g.size());
  for (int i = 0; i < g.n_t; ++i)
    for (int j = 0; j < g.n_omega; ++j) vv(solver_->index(i, j)) = v_dot(i, j);
  Eigen::VectorXd Av = solver_->apply(vv);
  Eigen::VectorXd b(g.size());

  for (int i = 0; i < g.n_t; ++i) {
    double et = std::exp(g.t(i));
    for (int j = 0; j < g.n_omega; ++j) {
      int row = solver_->index(i, j);
      if (i == 0 || i == g.n_t - 1) {
        b(row) = -Av(row);
        continue;
      }
      Local L = local(v_dot, i, j);
      if (!(L.dv(0) > 0.05 * u01))
        throw PicardRejected("picard_step: d_{y1} v = " + std::to_string(L.dv(0)) +
                             " at node (" + std::to_string(i) + ", " + std::to_string(j) +
                             "); hodograph map degenerates");
      Eigen::VectorXd dphi_w(1);
      dphi_w(0) = pert.d1(L.v);
      if (j == 0) {
        BoundaryResiduals G = boundary_G(L.dv, dphi_w, bg.U_minus, gas);
        b(row) = -et * G.G1 / a_omega_wedge_;
      } else if (j == g.n_omega - 1) {
        BoundaryResiduals G = boundary_G(L.dv, dphi_w, bg.U_minus, gas);
        b(row) = -et * G.G2 / (-a_omega_shock_);
      } else {
        Eigen::MatrixXd d2phi_w(1, 1);
        d2phi_w(0, 0) = pert.d2(L.v);
        Eigen::MatrixXd At = coefficients(gas, L.dv, bg.U_minus, dphi_w);
        double ratio = u01 / L.dv(0);
        double R = ratio * ratio * ratio * At.cwiseProduct(L.d2v).sum() -
                   u01 * u01 * u01 * source_Phi_w(gas, d2phi_w, L.dv, dphi_w, bg.U_minus);
        b(row) = -et * et * R;
      }
    }
  }
  Eigen::VectorXd ww = solver_->solve_rows(b);
  GridField w(g, "correction");
  for (int i = 0; i < g.n_t; ++i)
    for (int j = 0; j < g.n_omega; ++j) w(i, j) = ww(solver_->index(i, j));
  if (exclude_) {
    GridField u = v_dot;
    u.values += w.values;
    double c = contour_functional(problem_, u, *exclude_, 2) / mode_functional_;
    w.values -= c * mode_.values;
  }
  if (!w.finite()) throw PicardRejected("picard_step: non-finite iterate");
  return w;
}

GridField PicardScheme::step(const GridField& v_dot) const {
  GridField u = v_dot;
  u.values += correction(v_dot).values;
  u.label = "u_dot";
  return u;
}

PicardScheme::Residuals PicardScheme::residuals(const GridField& v_dot) const {
  const StripGrid& g = grid_;
  const BackgroundShock& bg = config_.bg;
  GasModel gas = bg.gas();
  double u01 = bg.du0(0);
  Residuals r;
  Eigen::VectorXd none(0);
  for (int i = 1; i < g.n_t - 1; ++i) {
    for (int j = 0; j < g.n_omega; ++j) {
      Local L = local(v_dot, i, j);
      Eigen::VectorXd dphi_w(1);
      dphi_w(0) = config_.pert.d1(L.v);
      if (j == 0) {
        r.wedge = std::max(r.wedge, std::abs(boundary_G(L.dv, dphi_w, bg.U_minus, gas).G1 / a_omega_wedge_));
      } else if (j == g.n_omega - 1) {
        r.shock = std::max(r.shock, std::abs(boundary_G(L.dv, dphi_w, bg.U_minus, gas).G2 / a_omega_shock_));
      } else {
        double res = transformed_residual(bg, config_.pert, L.v, L.dv, L.d2v, none);
        r.interior = std::max(r.interior, std::abs(u01 * u01 * u01 * res));
      }
    }
  }
  return r;
}

double PicardScheme::corner_defect(const GridField& u_dot) const {
  double m = 0.0;
  for (int j = 0; j < grid_.n_omega; ++j) {
    StripJet jet = strip_jet(u_dot, 0, j);
    m = std::max(m, (P_.transpose() * jet.gradient()).norm());
  }
  return m;
}

GridField picard_step(const GridField& v_dot, const IterationConfig& config) {
  return PicardScheme(config).step(v_dot);
}

// ---------------------------------------------------------------------------

double IterationReport::max_ratio() const {
  if (diverged) return std::numeric_limits<double>::infinity();
  double m = 0.0;
  for (double r : ratios) m = std::max(m, r);
  return m;
}

std::vector<FrontSample> reconstruct_shock_front(const GridField& u_dot, const IterationConfig& config) {
  StripGrid g = config.grid();
  Eigen::Matrix2d Pinv = canonical_transforms(config.bg).P.inverse();
  std::vector<FrontSample> out;
  int j = g.n_omega - 1;
  for (int i = 0; i < g.n_t; ++i) {
    Eigen::Vector2d y = Pinv * u_dot.point(i, j);
    FrontSample s;
    s.y2 = y(1);
    s.x1 = config.bg.du0(0) * y(0) + config.bg.du0(1) * y(1) + u_dot(i, j);
    s.x2 = s.y2 + config.pert.value(s.x1);
    out.push_back(s);
  }
  return out;
}

IterationReport run_iteration(const IterationConfig& config) {
  PicardScheme scheme(config);
  const StripGrid& g = scheme.grid();
  IterationReport rep;
  rep.delta = config.pert.delta;
  GridField v(g, "u_dot");
  int above = 0;
  for (int k = 1; k <= config.max_iter; ++k) {
    GridField d;
    try {
      d = scheme.correction(v);
    } catch (const PicardRejected& e) {
      rep.diverged = true;
      rep.message = e.what();
      break;
    }
    GridField u = v;
    u.values += d.values;
    double nu = scheme.norm(u);
    double nd = scheme.norm(d);
    rep.norms.push_back(nu);
    rep.diffs.push_back(nd);
    rep.iterations = k;
    v = u;
    if (!std::isfinite(nu) || !std::isfinite(nd)) {
      rep.diverged = true;
      rep.message = "non-finite iterate norm";
      break;
    }
    if (k >= 2 && rep.diffs[k - 2] > 0.0) {
      double r = nd / rep.diffs[k - 2];
      rep.ratios.push_back(r);
      above = r > 1.0 ? above + 1 : 0;
    }
    if (nd < config.tol) {
      rep.converged = true;
      break;
    }
    if (above >= 3) {
      rep.diverged = true;
      rep.message = "contraction ratio above 1 for 3 consecutive steps";
      break;
    }
  }
  if (!rep.converged && !rep.diverged) rep.message = "max_iter reached";
  rep.u_dot = v;
  rep.K_hat = rep.delta > 0.0 && !rep.norms.empty() ? rep.norms.back() / rep.delta
                                                     : std::numeric_limits<double>::quiet_NaN();
  try {
    rep.corner_fit = corner_exponent_fit(v, g.t_min + 0.5, g.t_min + 2.0);
    rep.corner_fit_valid = true;
  } catch (const std::exception&) {
    rep.corner_fit_valid = false;
  }
  rep.corner_defect = scheme.corner_defect(v);
  try {
    rep.residuals = scheme.residuals(v);
  } catch (const std::exception& e) {
    rep.residuals.interior = std::numeric_limits<double>::infinity();
    if (rep.message.empty()) rep.message = e.what();
  }
  Manufactured m = manufactured_problem(scheme.problem(), {}, g);
  GridField um = solve_sector(scheme.problem(), m.f, m.g_plus, m.g_minus, g,
                              FarFieldPolicy::dirichlet(m.corner_trace(), m.far_trace()));
  rep.manufactured_error = max_error(um, m.exact);
  rep.front = reconstruct_shock_front(v, config);
  return rep;
}

std::vector<StudyRow> scaling_study(const IterationConfig& config, const std::vector<double>& deltas) {
  // independent runs; rows are merged in input order
  std::vector<std::future<StudyRow>> jobs;
  for (double d : deltas) {
    jobs.push_back(std::async(std::launch::async, [config, d] {
      IterationConfig c = config;
      c.pert = perturbation_for_delta(d, c.spec, 2);
      IterationReport rep = run_iteration(c);
      StudyRow row;
      row.delta = d;
      row.norm_udot = rep.norms.empty() ? 0.0 : rep.norms.back();
      row.K_hat = rep.K_hat;
      row.flagged = !(d > 0.0);
      row.final_ratio = rep.max_ratio();
      row.converged = rep.converged;
      return row;
    }));
  }
  std::vector<StudyRow> rows;
  for (auto& j : jobs) rows.push_back(j.get());
  return rows;
}

double find_delta0(const IterationConfig& config, double target, double rel_tol) {
  auto ratio_at = [&](double d) {
    IterationConfig c = config;
    c.pert = perturbation_for_delta(d, c.spec, 2);
    IterationReport rep = run_iteration(c);
    if (!rep.converged) return std::numeric_limits<double>::infinity();
    return rep.max_ratio();
  };
  double d = 1e-2;
  double r = ratio_at(d);
  double lo, hi;
  if (r < target) {
    lo = d;
    hi = d * 4.0;
    for (int k = 0; k < 40 && ratio_at(hi) < target; ++k) {
      lo = hi;
      hi *= 4.0;
    }
  } else {
    hi = d;
    lo = d / 4.0;
    for (int k = 0; k < 40 && ratio_at(lo) >= target; ++k) {
      hi = lo;
      lo /= 4.0;
    }
  }
  while (hi / lo > 1.0 + rel_tol) {
    double mid = std::sqrt(lo * hi);
    if (ratio_at(mid) < target) lo = mid;
    else hi = mid;
  }
  return lo;
}

IterationReport strong_branch_2d_run(const IterationConfig& config, int dim) {
  if (config.bg.branch != Branch::strong)
    throw std::invalid_argument("strong_branch_2d_run: background must be on the strong branch");
  if (dim >= 3) {
    BackgroundShock bg3 = config.bg;
    if (admissible_weights(bg3, 3).empty())
      throw std::domain_error("strong_branch_2d_run: no admissible weights in dimension 3; run refused");
  }
  return run_iteration(config);
}

// ---------------------------------------------------------------------------

SectorSystem<std::complex<double>> md_mode_system(const BackgroundShock& bg, double eta,
                                                  const StripGrid& grid) {
  if (eta == 0.0) throw std::invalid_argument("md_mode_system: eta must be nonzero");
  ObliqueAngularProblem p = skew_problem(bg);
  SectorSystem<std::complex<double>> sys;
  sys.grid = grid;
  sys.grid.omega_minus = 0.0;
  sys.grid.omega_plus = p.omega_star;
  sys.alpha_plus = p.alpha_plus;
  sys.alpha_minus = p.alpha_minus;
  sys.kappa_plus = std::complex<double>(0.0, eta * p.c_plus(0));
  sys.kappa_minus = std::complex<double>(0.0, eta * p.c_minus(0));
  sys.mu = eta * eta;
  sys.corner = EndCondition::dirichlet();
  sys.far = EndCondition::dirichlet();
  return sys;
}

ComplexGridField md_mode_solve(const BackgroundShock& bg, double eta, const ComplexManufactured& data) {
  SectorSystem<std::complex<double>> sys = md_mode_system(bg, eta, data.f.grid);
  if (std::abs(sys.grid.omega_plus - data.f.grid.omega_plus) > 1e-10 || data.f.grid.omega_minus != 0.0)
    throw std::invalid_argument("md_mode_solve: data grid must span the skew sector");
  SectorSolver<std::complex<double>> solver(sys);
  ComplexGridField u(sys.grid, "U");
  u.values = solver.solve(data.f.values, data.g_plus, data.g_minus, data.corner_trace(), data.far_trace());
  return u;
}

std::vector<ConvergenceRow> md_mode_convergence(const BackgroundShock& bg, double eta,
                                                const StripGrid& base, int levels) {
  std::vector<ConvergenceRow> rows;
  StripGrid g = md_mode_system(bg, eta, base).grid;
  for (int l = 0; l < levels; ++l) {
    ComplexManufactured m = manufactured_complex(md_mode_system(bg, eta, g));
    ComplexGridField u = md_mode_solve(bg, eta, m);
    ConvergenceRow row;
    row.h = g.h_t();
    row.max_error = max_error(u, m.exact);
    row.order_estimate = rows.empty() ? std::numeric_limits<double>::quiet_NaN()
                                      : std::log(rows.back().max_error / row.max_error) /
                                            std::log(rows.back().h / row.h);
    rows.push_back(row);
    g = g.refined();
  }
  return rows;
}

}  // namespace wedgeshock
