#include "wedgeshock/elliptic.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <random>

namespace wedgeshock {

void StripGrid::validate() const {
  if (n_t < 8 || n_omega < 8) throw std::invalid_argument("StripGrid: n_t and n_omega must be >= 8");
  if (!(t_max > t_min)) throw std::invalid_argument("StripGrid: t_max must exceed t_min");
  if (!(omega_plus > omega_minus))
    throw std::invalid_argument("StripGrid: omega_plus must exceed omega_minus");
  if (!std::isfinite(t_min) || !std::isfinite(t_max))
    throw std::invalid_argument("StripGrid: non-finite t bounds");
}

StripGrid StripGrid::refined() const {
  StripGrid g = *this;
  g.n_t = 2 * (n_t - 1) + 1;
  g.n_omega = 2 * (n_omega - 1) + 1;
  return g;
}

// ---------------------------------------------------------------------------
// strip operator

template <class S>
SectorSolver<S>::SectorSolver(const SectorSystem<S>& sys) : sys_(sys) {
  const StripGrid& g = sys_.grid;
  g.validate();
  const int nt = g.n_t, nw = g.n_omega, N = g.size();
  const double ht = g.h_t(), hw = g.h_omega();
  std::vector<Eigen::Triplet<S>> trip;
  trip.reserve(static_cast<size_t>(N) * 7);
  auto add = [&](int row, int i, int j, S v) { trip.emplace_back(row, index(i, j), v); };

  for (int i = 0; i < nt; ++i) {
    double et = std::exp(g.t(i));
    for (int j = 0; j < nw; ++j) {
      int row = index(i, j);
      if (i == 0 || i == nt - 1) {
        const EndCondition& e = i == 0 ? sys_.corner : sys_.far;
        double s = i == 0 ? 1.0 : -1.0;  // one-sided stencil orientation
        int d = i == 0 ? 1 : -1;
        add(row, i, j, S(e.a) + S(e.b * -3.0 * s / (2.0 * ht)));
        add(row, i + d, j, S(e.b * 4.0 * s / (2.0 * ht)));
        add(row, i + 2 * d, j, S(e.b * -1.0 * s / (2.0 * ht)));
      } else if (j == 0) {
        add(row, i, 0, S(-3.0 / (2.0 * hw)) + sys_.kappa_minus * et);
        add(row, i, 1, S(4.0 / (2.0 * hw)));
        add(row, i, 2, S(-1.0 / (2.0 * hw)));
        add(row, i + 1, 0, S(sys_.alpha_minus / (2.0 * ht)));
        add(row, i - 1, 0, S(-sys_.alpha_minus / (2.0 * ht)));
      } else if (j == nw - 1) {
        add(row, i, j, S(-3.0 / (2.0 * hw)) + sys_.kappa_plus * et);
        add(row, i, j - 1, S(4.0 / (2.0 * hw)));
        add(row, i, j - 2, S(-1.0 / (2.0 * hw)));
        add(row, i + 1, j, S(sys_.alpha_plus / (2.0 * ht)));
        add(row, i - 1, j, S(-sys_.alpha_plus / (2.0 * ht)));
      } else {
        add(row, i, j, S(-2.0 / (ht * ht) - 2.0 / (hw * hw) - sys_.mu * et * et));
        add(row, i + 1, j, S(1.0 / (ht * ht)));
        add(row, i - 1, j, S(1.0 / (ht * ht)));
        add(row, i, j + 1, S(1.0 / (hw * hw)));
        add(row, i, j - 1, S(1.0 / (hw * hw)));
      }
    }
  }
  A_.resize(N, N);
  A_.setFromTriplets(trip.begin(), trip.end());
  A_.makeCompressed();
  Eigen::VectorXd rowsum = Eigen::VectorXd::Zero(N);
  for (int k = 0; k < A_.outerSize(); ++k)
    for (typename Eigen::SparseMatrix<S>::InnerIterator it(A_, k); it; ++it) rowsum(it.row()) += std::abs(it.value());
  anorm_ = rowsum.maxCoeff();
  lu_ = std::make_shared<Eigen::SparseLU<Eigen::SparseMatrix<S>, Eigen::COLAMDOrdering<int>>>();
  lu_->analyzePattern(A_);
  lu_->factorize(A_);
  if (lu_->info() != Eigen::Success)
    throw SingularSystem("SectorSolver: factorization failed: " + lu_->lastErrorMessage());
}

template <class S>
typename SectorSolver<S>::Vec SectorSolver<S>::rhs(const Mat& f, const Vec& g_plus,
                                                   const Vec& g_minus, const Vec& corner_value,
                                                   const Vec& far_value) const {
  const StripGrid& g = sys_.grid;
  const int nt = g.n_t, nw = g.n_omega;
  if (f.rows() != nt || f.cols() != nw) throw std::invalid_argument("SectorSolver::rhs: f has wrong shape");
  if (g_plus.size() != nt || g_minus.size() != nt)
    throw std::invalid_argument("SectorSolver::rhs: boundary data must have n_t entries");
  if (corner_value.size() != nw || far_value.size() != nw)
    throw std::invalid_argument("SectorSolver::rhs: end data must have n_omega entries");
  Vec b(g.size());
  for (int i = 0; i < nt; ++i) {
    double et = std::exp(g.t(i));
    for (int j = 0; j < nw; ++j) {
      S v;
      if (i == 0) v = corner_value(j);
      else if (i == nt - 1) v = far_value(j);
      else if (j == 0) v = et * g_minus(i);
      else if (j == nw - 1) v = et * g_plus(i);
      else v = et * et * f(i, j);
      b(index(i, j)) = v;
    }
  }
  return b;
}

template <class S>
typename SectorSolver<S>::Vec SectorSolver<S>::solve_rows(const Vec& b) const {
  Vec u = lu_->solve(b);
  if (lu_->info() != Eigen::Success || !u.allFinite())
    throw SingularSystem("SectorSolver: solve failed");
  Vec res = A_ * u - b;
  double scale = anorm_ * u.cwiseAbs().maxCoeff() + b.cwiseAbs().maxCoeff();
  last_residual_ = scale > 0.0 ? res.cwiseAbs().maxCoeff() / scale : 0.0;
  if (last_residual_ > 1e-8)
    throw SingularSystem("SectorSolver: residual " + std::to_string(last_residual_) + " too large");
  return u;
}

template <class S>
typename SectorSolver<S>::Mat SectorSolver<S>::solve(const Mat& f, const Vec& g_plus,
                                                     const Vec& g_minus, const Vec& corner_value,
                                                     const Vec& far_value) const {
  Vec u = solve_rows(rhs(f, g_plus, g_minus, corner_value, far_value));
  const StripGrid& g = sys_.grid;
  Mat out(g.n_t, g.n_omega);
  for (int i = 0; i < g.n_t; ++i)
    for (int j = 0; j < g.n_omega; ++j) out(i, j) = u(index(i, j));
  return out;
}

template <class S>
double SectorSolver<S>::condition_estimate(int probes) const {
  std::mt19937 rng(12345);
  std::uniform_int_distribution<int> coin(0, 1);
  double inv = 0.0;
  for (int p = 0; p < probes; ++p) {
    Vec z(A_.rows());
    for (int k = 0; k < z.size(); ++k) z(k) = S(coin(rng) ? 1.0 : -1.0);
    Vec x = lu_->solve(z);
    inv = std::max(inv, x.cwiseAbs().maxCoeff());
  }
  return anorm_ * inv;
}

template class SectorSolver<double>;
template class SectorSolver<std::complex<double>>;

// ---------------------------------------------------------------------------
// policies

FarFieldPolicy FarFieldPolicy::dirichlet(Eigen::VectorXd corner, Eigen::VectorXd far) {
  FarFieldPolicy p;
  p.kind = Kind::dirichlet;
  p.corner_trace = std::move(corner);
  p.far_trace = std::move(far);
  return p;
}

FarFieldPolicy FarFieldPolicy::asymptotic(double sigma_corner, double sigma_far) {
  FarFieldPolicy p;
  p.kind = Kind::asymptotic;
  p.sigma_corner = sigma_corner;
  p.sigma_far = sigma_far;
  return p;
}

namespace {

std::vector<double> nearby_eigenvalues(const ObliqueAngularProblem& p, double lo, double hi) {
  double pad = M_PI / p.omega_star + 1.0;
  return eigenvalues_in(p, Interval::closed(lo - pad, hi + pad)).values;
}

void check_resonance(const std::vector<double>& lam, double sigma, const char* which) {
  for (double l : lam)
    if (std::abs(l - sigma) < 1e-6)
      throw ResonanceError(std::string("solve_sector: ") + which + " exponent " +
                           std::to_string(sigma) + " resonates with eigenvalue " + std::to_string(l));
}

void check_grid(const ObliqueAngularProblem& p, const StripGrid& grid) {
  grid.validate();
  if (std::abs(grid.omega_plus - grid.omega_minus - p.omega_star) > 1e-10)
    throw std::invalid_argument("solve_sector: grid opening does not match the problem's omega_star");
}

}  // namespace

std::pair<EndCondition, EndCondition> asymptotic_ends(const ObliqueAngularProblem& p,
                                                      double sigma_corner, double sigma_far) {
  auto lam = nearby_eigenvalues(p, std::min(sigma_corner, sigma_far), std::max(sigma_corner, sigma_far));
  check_resonance(lam, sigma_corner, "corner");
  check_resonance(lam, sigma_far, "far-field");
  auto hi = std::upper_bound(lam.begin(), lam.end(), sigma_corner);
  auto lo = std::lower_bound(lam.begin(), lam.end(), sigma_far);
  if (hi == lam.end() || lo == lam.begin())
    throw std::domain_error("asymptotic_ends: eigenvalue search window too small");
  return {EndCondition::exponent(*hi), EndCondition::exponent(*(lo - 1))};
}

GridField solve_sector(const ObliqueAngularProblem& problem, const GridField& f,
                       const Eigen::VectorXd& g_plus, const Eigen::VectorXd& g_minus,
                       const StripGrid& grid, const FarFieldPolicy& policy) {
  check_grid(problem, grid);
  if (!f.finite() || !g_plus.allFinite() || !g_minus.allFinite())
    throw std::invalid_argument("solve_sector: non-finite data");
  SectorSystem<double> sys;
  sys.grid = grid;
  sys.alpha_plus = problem.alpha_plus;
  sys.alpha_minus = problem.alpha_minus;
  Eigen::VectorXd cv = Eigen::VectorXd::Zero(grid.n_omega), fv = Eigen::VectorXd::Zero(grid.n_omega);
  if (policy.kind == FarFieldPolicy::Kind::dirichlet) {
    sys.corner = EndCondition::dirichlet();
    sys.far = EndCondition::dirichlet();
    if (policy.corner_trace.size()) cv = policy.corner_trace;
    if (policy.far_trace.size()) fv = policy.far_trace;
    if (cv.size() != grid.n_omega || fv.size() != grid.n_omega)
      throw std::invalid_argument("solve_sector: traces must have n_omega entries");
  } else {
    auto ends = asymptotic_ends(problem, policy.sigma_corner, policy.sigma_far);
    sys.corner = ends.first;
    sys.far = ends.second;
    if (policy.exclude_lambda) {
      // far end at the next eigenvalue below the excluded one
      double lx = *policy.exclude_lambda;
      auto lam = nearby_eigenvalues(problem, lx, lx);
      auto it = std::lower_bound(lam.begin(), lam.end(), lx - 1e-9);
      if (it == lam.begin() || std::abs(*it - lx) > 1e-9)
        throw std::invalid_argument("solve_sector: excluded value is not an eigenvalue");
      sys.far = EndCondition::exponent(*(it - 1));
    }
  }
  SectorSolver<double> solver(sys);
  GridField u(grid, "u");
  u.values = solver.solve(f.values, g_plus, g_minus, cv, fv);
  if (policy.kind == FarFieldPolicy::Kind::asymptotic && policy.exclude_lambda) {
    double lx = *policy.exclude_lambda;
    AngularMode v = eigenfunction(problem, lx);
    double wmid = 0.5 * (grid.omega_minus + grid.omega_plus);
    double weight = sys.far.a + sys.far.b * lx;
    Eigen::VectorXd far_s(grid.n_omega);
    for (int j = 0; j < grid.n_omega; ++j)
      far_s(j) = weight * std::exp(lx * grid.t_max) * v.value(grid.omega(j) - wmid);
    GridField s(grid, "excluded mode");
    Eigen::VectorXd zt = Eigen::VectorXd::Zero(grid.n_t), zw = Eigen::VectorXd::Zero(grid.n_omega);
    s.values = solver.solve(Eigen::MatrixXd::Zero(grid.n_t, grid.n_omega), zt, zt, zw, far_s);
    const int row = 2;
    double is = contour_functional(problem, s, lx, row);
    if (std::abs(is) < 1e-300) throw SingularSystem("solve_sector: excluded mode has zero functional");
    double c = contour_functional(problem, u, lx, row) / is;
    u.values -= c * s.values;
  }
  if (!u.finite()) throw SingularSystem("solve_sector: non-finite solution");
  return u;
}

double contour_functional(const ObliqueAngularProblem& p, const GridField& u, double lambda,
                          int row) {
  const StripGrid& g = u.grid;
  if (row < 1 || row > g.n_t - 2) throw std::invalid_argument("contour_functional: row must be interior");
  AngularMode v = eigenfunction(p, lambda);
  double wmid = 0.5 * (g.omega_minus + g.omega_plus);
  double t = g.t(row), ht = g.h_t(), hw = g.h_omega();
  double e = std::exp(-lambda * t);
  double sum = 0.0;
  const int nw = g.n_omega;
  std::vector<double> psi(nw);
  for (int j = 0; j < nw; ++j) {
    psi[j] = e * v.value(g.omega(j) - wmid);
    double ut = (u(row + 1, j) - u(row - 1, j)) / (2.0 * ht);
    double val = psi[j] * ut + lambda * psi[j] * u(row, j);
    sum += (j == 0 || j == nw - 1 ? 0.5 : 1.0) * val * hw;
  }
  return sum + p.alpha_plus * psi[nw - 1] * u(row, nw - 1) + p.alpha_minus * psi[0] * u(row, 0);
}

// ---------------------------------------------------------------------------
// manufactured solutions

namespace {

// u = R(r) Theta(w) with R = r^2 e^{-r}
template <class S, class Theta>
ManufacturedT<S> product_solution(const SectorSystem<S>& sys, Theta theta) {
  const StripGrid& g = sys.grid;
  ManufacturedT<S> m;
  m.f = GridFieldT<S>(g, "f");
  m.exact = GridFieldT<S>(g, "exact");
  m.g_plus.resize(g.n_t);
  m.g_minus.resize(g.n_t);
  for (int i = 0; i < g.n_t; ++i) {
    double r = g.r(i);
    double R = r * r * std::exp(-r);
    double R1 = (2.0 * r - r * r) * std::exp(-r);
    double R2 = (2.0 - 4.0 * r + r * r) * std::exp(-r);
    for (int j = 0; j < g.n_omega; ++j) {
      std::array<S, 3> th = theta(g.omega(j));
      S u = R * th[0];
      m.exact(i, j) = u;
      m.f(i, j) = (R2 + R1 / r) * th[0] + R * th[2] / (r * r) - sys.mu * u;
    }
    std::array<S, 3> tp = theta(g.omega_plus), tm = theta(g.omega_minus);
    m.g_plus(i) = -R * tp[1] / r + sys.alpha_plus * R1 * tp[0] + sys.kappa_plus * R * tp[0];
    m.g_minus(i) = R * tm[1] / r + sys.alpha_minus * R1 * tm[0] + sys.kappa_minus * R * tm[0];
  }
  return m;
}

}  // namespace

Manufactured manufactured_problem(const ObliqueAngularProblem& problem,
                                  const ManufacturedChoice& choice, const StripGrid& grid) {
  check_grid(problem, grid);
  if (choice.kind == ManufacturedChoice::Kind::eigenfunction) {
    AngularMode v = eigenfunction(problem, choice.lambda);
    double wmid = 0.5 * (grid.omega_minus + grid.omega_plus);
    Manufactured m;
    m.f = GridField(grid, "f");
    m.exact = GridField(grid, "exact");
    m.g_plus = Eigen::VectorXd::Zero(grid.n_t);
    m.g_minus = Eigen::VectorXd::Zero(grid.n_t);
    for (int i = 0; i < grid.n_t; ++i)
      for (int j = 0; j < grid.n_omega; ++j)
        m.exact(i, j) = std::exp(choice.lambda * grid.t(i)) * v.value(grid.omega(j) - wmid);
    return m;
  }
  SectorSystem<double> sys;
  sys.grid = grid;
  sys.alpha_plus = problem.alpha_plus;
  sys.alpha_minus = problem.alpha_minus;
  return product_solution<double>(sys, [](double w) {
    return std::array<double, 3>{std::cos(w), -std::sin(w), -std::cos(w)};
  });
}

ComplexManufactured manufactured_complex(const SectorSystem<std::complex<double>>& sys) {
  using C = std::complex<double>;
  const C I(0.0, 1.0);
  return product_solution<C>(sys, [I](double w) {
    return std::array<C, 3>{std::cos(w) + I * std::sin(2.0 * w), -std::sin(w) + 2.0 * I * std::cos(2.0 * w),
                            -std::cos(w) - 4.0 * I * std::sin(2.0 * w)};
  });
}

// ---------------------------------------------------------------------------
// diagnostics

ExponentFit corner_exponent_fit(const GridField& u, double t_lo, double t_hi) {
  const StripGrid& g = u.grid;
  if (t_lo < g.t_min - 1e-12 || t_hi > g.t_max + 1e-12 || !(t_hi > t_lo))
    throw std::invalid_argument("corner_exponent_fit: window outside the grid");
  std::vector<double> xs, ys;
  for (int i = 0; i < g.n_t; ++i) {
    double t = g.t(i);
    if (t < t_lo - 1e-12 || t > t_hi + 1e-12) continue;
    double m = u.values.row(i).cwiseAbs().maxCoeff();
    if (!(m > 0.0)) throw std::domain_error("corner_exponent_fit: field vanishes in the window");
    xs.push_back(t);
    ys.push_back(std::log(m));
  }
  if (xs.size() < 2) throw std::invalid_argument("corner_exponent_fit: window holds fewer than 2 rows");
  double n = xs.size(), sx = 0, sy = 0;
  for (size_t k = 0; k < xs.size(); ++k) {
    sx += xs[k];
    sy += ys[k];
  }
  double mx = sx / n, my = sy / n, sxx = 0, sxy = 0, syy = 0;
  for (size_t k = 0; k < xs.size(); ++k) {
    sxx += (xs[k] - mx) * (xs[k] - mx);
    sxy += (xs[k] - mx) * (ys[k] - my);
    syy += (ys[k] - my) * (ys[k] - my);
  }
  ExponentFit fit;
  fit.lambda_hat = sxy / sxx;
  double ssr = 0.0;
  for (size_t k = 0; k < xs.size(); ++k) {
    double e = ys[k] - (my + fit.lambda_hat * (xs[k] - mx));
    ssr += e * e;
  }
  fit.r_squared = syy > 0.0 ? 1.0 - ssr / syy : 1.0;
  return fit;
}

double condition_diagnostic(const ObliqueAngularProblem& problem, const StripGrid& grid,
                            double lambda) {
  check_grid(problem, grid);
  SectorSystem<double> sys;
  sys.grid = grid;
  sys.alpha_plus = problem.alpha_plus;
  sys.alpha_minus = problem.alpha_minus;
  sys.corner = EndCondition::exponent(lambda);
  sys.far = EndCondition::exponent(lambda);
  try {
    SectorSolver<double> s(sys);
    return s.condition_estimate();
  } catch (const SingularSystem&) {
    return std::numeric_limits<double>::infinity();
  }
}

std::vector<ConvergenceRow> convergence_study(const ObliqueAngularProblem& problem,
                                              const StripGrid& base, int levels) {
  std::vector<ConvergenceRow> rows;
  StripGrid g = base;
  for (int l = 0; l < levels; ++l) {
    Manufactured m = manufactured_problem(problem, {}, g);
    GridField u = solve_sector(problem, m.f, m.g_plus, m.g_minus, g,
                               FarFieldPolicy::dirichlet(m.corner_trace(), m.far_trace()));
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

// ---------------------------------------------------------------------------
// weighted norms

WeightSpec WeightSpec::from_sigma(int ell, double alpha, double sigma0, double sigma_inf) {
  WeightSpec s;
  s.ell = ell;
  s.alpha = alpha;
  s.beta0 = 1.0 + alpha - sigma0;
  s.beta_inf = 1.0 + alpha - sigma_inf;
  s.validate();
  return s;
}

void WeightSpec::validate() const {
  if (ell < 0 || ell > 2) throw std::invalid_argument("WeightSpec: ell must be 0, 1 or 2");
  if (!(alpha > 0.0 && alpha < 1.0)) throw std::invalid_argument("WeightSpec: alpha must lie in (0,1)");
  if (!std::isfinite(beta0) || !std::isfinite(beta_inf))
    throw std::invalid_argument("WeightSpec: non-finite weights");
}

namespace {

// derivative along one axis, second order everywhere
Eigen::MatrixXd diff(const Eigen::MatrixXd& u, double h, int axis) {
  Eigen::MatrixXd d(u.rows(), u.cols());
  int n = axis == 0 ? u.rows() : u.cols();
  auto at = [&](int k, int o) -> double { return axis == 0 ? u(k, o) : u(o, k); };
  int other = axis == 0 ? u.cols() : u.rows();
  for (int o = 0; o < other; ++o) {
    for (int k = 0; k < n; ++k) {
      double v;
      if (k == 0) v = (-3.0 * at(0, o) + 4.0 * at(1, o) - at(2, o)) / (2.0 * h);
      else if (k == n - 1) v = (3.0 * at(n - 1, o) - 4.0 * at(n - 2, o) + at(n - 3, o)) / (2.0 * h);
      else v = (at(k + 1, o) - at(k - 1, o)) / (2.0 * h);
      (axis == 0 ? d(k, o) : d(o, k)) = v;
    }
  }
  return d;
}

Eigen::MatrixXd diff2(const Eigen::MatrixXd& u, double h, int axis) {
  Eigen::MatrixXd d(u.rows(), u.cols());
  int n = axis == 0 ? u.rows() : u.cols();
  auto at = [&](int k, int o) -> double { return axis == 0 ? u(k, o) : u(o, k); };
  int other = axis == 0 ? u.cols() : u.rows();
  for (int o = 0; o < other; ++o) {
    for (int k = 0; k < n; ++k) {
      double v;
      if (k == 0) v = (2.0 * at(0, o) - 5.0 * at(1, o) + 4.0 * at(2, o) - at(3, o)) / (h * h);
      else if (k == n - 1)
        v = (2.0 * at(n - 1, o) - 5.0 * at(n - 2, o) + 4.0 * at(n - 3, o) - at(n - 4, o)) / (h * h);
      else v = (at(k + 1, o) - 2.0 * at(k, o) + at(k - 1, o)) / (h * h);
      (axis == 0 ? d(k, o) : d(o, k)) = v;
    }
  }
  return d;
}

// Cartesian derivatives D^k u for |k| <= ell, ordered 1 | Y1, Y2 | Y1Y1, Y1Y2, Y2Y2
std::vector<Eigen::MatrixXd> cartesian_derivatives(const GridField& f, int ell) {
  const StripGrid& g = f.grid;
  std::vector<Eigen::MatrixXd> out{f.values};
  if (ell == 0) return out;
  Eigen::MatrixXd ut = diff(f.values, g.h_t(), 0), uw = diff(f.values, g.h_omega(), 1);
  Eigen::MatrixXd d1(g.n_t, g.n_omega), d2(g.n_t, g.n_omega);
  for (int i = 0; i < g.n_t; ++i) {
    double e = std::exp(-g.t(i));
    for (int j = 0; j < g.n_omega; ++j) {
      double c = std::cos(g.omega(j)), s = std::sin(g.omega(j));
      d1(i, j) = e * (c * ut(i, j) - s * uw(i, j));
      d2(i, j) = e * (s * ut(i, j) + c * uw(i, j));
    }
  }
  out.push_back(d1);
  out.push_back(d2);
  if (ell == 1) return out;
  Eigen::MatrixXd utt = diff2(f.values, g.h_t(), 0), uww = diff2(f.values, g.h_omega(), 1);
  Eigen::MatrixXd utw = diff(ut, g.h_omega(), 1);
  Eigen::MatrixXd u11(g.n_t, g.n_omega), u12(g.n_t, g.n_omega), u22(g.n_t, g.n_omega);
  for (int i = 0; i < g.n_t; ++i) {
    double e2 = std::exp(-2.0 * g.t(i));
    for (int j = 0; j < g.n_omega; ++j) {
      double c = std::cos(g.omega(j)), s = std::sin(g.omega(j));
      double a = utt(i, j) - ut(i, j), b = ut(i, j) + uww(i, j), m = utw(i, j) - uw(i, j);
      u11(i, j) = e2 * (c * c * a + s * s * b - 2.0 * s * c * m);
      u22(i, j) = e2 * (s * s * a + c * c * b + 2.0 * s * c * m);
      u12(i, j) = e2 * (s * c * (a - b) + (c * c - s * s) * m);
    }
  }
  out.push_back(u11);
  out.push_back(u12);
  out.push_back(u22);
  return out;
}

double d1_at(const Eigen::MatrixXd& u, int i, int j, int axis, double h) {
  int n = axis == 0 ? u.rows() : u.cols();
  int k = axis == 0 ? i : j;
  auto at = [&](int m) { return axis == 0 ? u(m, j) : u(i, m); };
  if (k == 0) return (-3.0 * at(0) + 4.0 * at(1) - at(2)) / (2.0 * h);
  if (k == n - 1) return (3.0 * at(n - 1) - 4.0 * at(n - 2) + at(n - 3)) / (2.0 * h);
  return (at(k + 1) - at(k - 1)) / (2.0 * h);
}

double d2_at(const Eigen::MatrixXd& u, int i, int j, int axis, double h) {
  int n = axis == 0 ? u.rows() : u.cols();
  int k = axis == 0 ? i : j;
  auto at = [&](int m) { return axis == 0 ? u(m, j) : u(i, m); };
  if (k == 0) return (2.0 * at(0) - 5.0 * at(1) + 4.0 * at(2) - at(3)) / (h * h);
  if (k == n - 1) return (2.0 * at(n - 1) - 5.0 * at(n - 2) + 4.0 * at(n - 3) - at(n - 4)) / (h * h);
  return (at(k + 1) - 2.0 * at(k) + at(k - 1)) / (h * h);
}

int order_of(int k) { return k == 0 ? 0 : (k < 3 ? 1 : 2); }

}  // namespace

Eigen::Vector2d StripJet::gradient() const {
  double e = std::exp(-t), c = std::cos(omega), s = std::sin(omega);
  return {e * (c * ut - s * uw), e * (s * ut + c * uw)};
}

Eigen::Matrix2d StripJet::hessian() const {
  double e2 = std::exp(-2.0 * t), c = std::cos(omega), s = std::sin(omega);
  double a = utt - ut, b = ut + uww, m = utw - uw;
  Eigen::Matrix2d H;
  H(0, 0) = e2 * (c * c * a + s * s * b - 2.0 * s * c * m);
  H(1, 1) = e2 * (s * s * a + c * c * b + 2.0 * s * c * m);
  H(0, 1) = H(1, 0) = e2 * (s * c * (a - b) + (c * c - s * s) * m);
  return H;
}

StripJet strip_jet(const GridField& f, int i, int j) {
  const StripGrid& g = f.grid;
  const Eigen::MatrixXd& u = f.values;
  double ht = g.h_t(), hw = g.h_omega();
  StripJet J;
  J.t = g.t(i);
  J.omega = g.omega(j);
  J.u = u(i, j);
  J.ut = d1_at(u, i, j, 0, ht);
  J.uw = d1_at(u, i, j, 1, hw);
  J.utt = d2_at(u, i, j, 0, ht);
  J.uww = d2_at(u, i, j, 1, hw);
  // omega-derivative of the t-derivative
  int n = g.n_omega;
  auto ut_at = [&](int m) { return d1_at(u, i, m, 0, ht); };
  if (j == 0) J.utw = (-3.0 * ut_at(0) + 4.0 * ut_at(1) - ut_at(2)) / (2.0 * hw);
  else if (j == n - 1) J.utw = (3.0 * ut_at(n - 1) - 4.0 * ut_at(n - 2) + ut_at(n - 3)) / (2.0 * hw);
  else J.utw = (ut_at(j + 1) - ut_at(j - 1)) / (2.0 * hw);
  return J;
}

double weighted_holder_norm(const GridField& u, int ell, double alpha, double beta) {
  if (ell < 0 || ell > 2) throw std::invalid_argument("weighted_holder_norm: ell must be 0, 1 or 2");
  const StripGrid& g = u.grid;
  auto D = cartesian_derivatives(u, ell);
  const int nk = static_cast<int>(D.size());
  double sup = 0.0;
  for (int i = 0; i < g.n_t; ++i) {
    double r = g.r(i);
    for (int j = 0; j < g.n_omega; ++j) {
      double s = 0.0;
      for (int k = 0; k < nk; ++k) s += std::pow(r, beta - ell - alpha + order_of(k)) * std::abs(D[k](i, j));
      sup = std::max(sup, s);
    }
  }
  static const int offsets[8][2] = {{1, 0}, {0, 1}, {1, 1}, {1, -1}, {2, 0}, {0, 2}, {4, 0}, {0, 4}};
  double sem = 0.0;
  for (int i = 0; i < g.n_t; ++i) {
    double rx = g.r(i);
    for (int j = 0; j < g.n_omega; ++j) {
      Eigen::Vector2d x = u.point(i, j);
      for (const auto& o : offsets) {
        int i2 = i + o[0], j2 = j + o[1];
        if (i2 < 0 || i2 >= g.n_t || j2 < 0 || j2 >= g.n_omega) continue;
        double ry = g.r(i2);
        double dist = (x - u.point(i2, j2)).norm();
        if (dist > 0.5 * std::min(rx, ry) || dist == 0.0) continue;
        double s = 0.0;
        for (int k = 0; k < nk; ++k) {
          double p = beta - ell + order_of(k);
          s += std::abs(std::pow(rx, p) * D[k](i, j) - std::pow(ry, p) * D[k](i2, j2));
        }
        sem = std::max(sem, s / std::pow(dist, alpha));
      }
    }
  }
  return sup + sem;
}

double weighted_holder_norm(const GridField& u, const WeightSpec& spec) {
  spec.validate();
  return weighted_holder_norm(u, spec.ell, spec.alpha, spec.beta0) +
         weighted_holder_norm(u, spec.ell, spec.alpha, spec.beta_inf);
}

double weighted_holder_norm_1d(const std::function<double(double, int)>& d, const WeightSpec& spec,
                               double x_min, double x_max, int samples) {
  spec.validate();
  if (!(x_min > 0.0 && x_max > x_min) || samples < 8)
    throw std::invalid_argument("weighted_holder_norm_1d: bad sampling range");
  std::vector<double> x(samples);
  std::vector<std::vector<double>> D(spec.ell + 1, std::vector<double>(samples));
  for (int k = 0; k < samples; ++k) {
    x[k] = x_min * std::pow(x_max / x_min, static_cast<double>(k) / (samples - 1));
    for (int m = 0; m <= spec.ell; ++m) D[m][k] = d(x[k], m);
  }
  auto one = [&](double beta) {
    double sup = 0.0, sem = 0.0;
    for (int k = 0; k < samples; ++k) {
      double s = 0.0;
      for (int m = 0; m <= spec.ell; ++m) s += std::pow(x[k], beta - spec.ell - spec.alpha + m) * std::abs(D[m][k]);
      sup = std::max(sup, s);
      for (int o : {1, 2, 4, 8, 16}) {
        int k2 = k + o;
        if (k2 >= samples) break;
        double dist = x[k2] - x[k];
        if (dist > 0.5 * x[k]) break;
        double q = 0.0;
        for (int m = 0; m <= spec.ell; ++m) {
          double p = beta - spec.ell + m;
          q += std::abs(std::pow(x[k], p) * D[m][k] - std::pow(x[k2], p) * D[m][k2]);
        }
        sem = std::max(sem, q / std::pow(dist, spec.alpha));
      }
    }
    return sup + sem;
  };
  return one(spec.beta0) + one(spec.beta_inf);
}

}  // namespace wedgeshock
