#include "wedgeshock/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "roots.hpp"

namespace wedgeshock {

ObliqueAngularProblem::ObliqueAngularProblem(double omega_star_, double alpha_plus_,
                                             double alpha_minus_)
    : omega_star(omega_star_), alpha_plus(alpha_plus_), alpha_minus(alpha_minus_) {
  if (!(omega_star > 0.0) || omega_star >= 2.0 * M_PI)
    throw std::invalid_argument("ObliqueAngularProblem: omega_star must lie in (0, 2 pi)");
}

double ObliqueAngularProblem::Phi() const { return std::atan(alpha_minus) + std::atan(alpha_plus); }

double ObliqueAngularProblem::lambda(int m) const { return (m * M_PI - Phi()) / omega_star; }

ObliqueAngularProblem planar_problem(const BackgroundShock& bg) {
  StabilityExponents e = stability_exponents(bg);
  return ObliqueAngularProblem(e.omega_s, -std::tan(e.omega_s + e.phi_s), 0.0);
}

ObliqueAngularProblem skew_problem(const BackgroundShock& bg) {
  if (bg.n < 3) throw std::invalid_argument("skew_problem: needs n >= 3");
  StabilityExponents e = stability_exponents(bg);
  CanonicalTransforms ct = canonical_transforms(bg);
  ObliqueAngularProblem p(e.omega_s_tilde, -std::tan(e.omega_s_tilde + e.phi_s_tilde), 0.0);
  Eigen::VectorXd nut = ct.P0 * bg.nu;
  p.c_plus = Eigen::VectorXd::Zero(bg.n - 2);
  p.c_minus = Eigen::VectorXd::Zero(bg.n - 2);
  double scale = std::cos(e.phi_s_tilde) / std::cos(e.omega_s_tilde + e.phi_s_tilde);
  for (int j = 2; j < bg.n; ++j) p.c_plus(j - 2) = -nut(j) / nut(1) * scale;
  return p;
}

namespace {
Eigen::Matrix2d boundary_matrix(const ObliqueAngularProblem& p, double lambda) {
  double wp = 0.5 * p.omega_star, wm = -0.5 * p.omega_star;
  double a = lambda * wp, b = lambda * wm;
  Eigen::Matrix2d M;
  M(0, 0) = lambda * (std::sin(a) + p.alpha_plus * std::cos(a));
  M(0, 1) = -std::cos(a) + p.alpha_plus * std::sin(a);
  M(1, 0) = lambda * (-std::sin(b) + p.alpha_minus * std::cos(b));
  M(1, 1) = std::cos(b) + p.alpha_minus * std::sin(b);
  return M;
}
}  // namespace

double char_determinant(const ObliqueAngularProblem& p, double lambda) {
  return boundary_matrix(p, lambda).determinant();
}

double reduced_determinant(const ObliqueAngularProblem& p, double lambda) {
  double a = 0.5 * lambda * p.omega_star, b = -a;
  double r00 = std::sin(a) + p.alpha_plus * std::cos(a);
  double r01 = -std::cos(a) + p.alpha_plus * std::sin(a);
  double r10 = -std::sin(b) + p.alpha_minus * std::cos(b);
  double r11 = std::cos(b) + p.alpha_minus * std::sin(b);
  return r00 * r11 - r01 * r10;
}

double AngularMode::value(double w) const {
  double s = lambda == 0.0 ? w : std::sin(lambda * w) / lambda;
  return a * std::cos(lambda * w) + b * s;
}

double AngularMode::derivative(double w) const {
  return -a * lambda * std::sin(lambda * w) + b * std::cos(lambda * w);
}

AngularMode eigenfunction(const ObliqueAngularProblem& p, double lambda, double tol) {
  Eigen::Matrix2d M = boundary_matrix(p, lambda);
  AngularMode mode;
  mode.lambda = lambda;
  Eigen::Vector2d r0 = M.row(0), r1 = M.row(1);
  Eigen::Vector2d r = r0.norm() >= r1.norm() ? r0 : r1;
  Eigen::Vector2d null = r.norm() == 0.0 ? Eigen::Vector2d(1.0, 0.0) : Eigen::Vector2d(r(1), -r(0));
  null.normalize();
  double scale = std::max(1.0, M.norm());
  if ((M * null).norm() > tol * scale)
    throw std::invalid_argument("eigenfunction: lambda = " + std::to_string(lambda) +
                                " is not an eigenvalue");
  mode.a = null(0);
  mode.b = null(1);
  double peak = 0.0, peak_val = 0.0;
  for (int k = 0; k <= 200; ++k) {
    double w = -0.5 * p.omega_star + p.omega_star * k / 200.0;
    double v = mode.value(w);
    if (std::abs(v) > peak) {
      peak = std::abs(v);
      peak_val = v;
    }
  }
  double s = peak_val < 0.0 ? -1.0 / peak : 1.0 / peak;
  mode.a *= s;
  mode.b *= s;
  return mode;
}

namespace {
void finish(std::vector<double>& v) {
  std::sort(v.begin(), v.end());
  std::vector<double> out;
  for (double x : v)
    if (out.empty() || std::abs(x - out.back()) > 1e-9) out.push_back(x);
  v.swap(out);
}
}  // namespace

EigenSet eigenvalues_in(const ObliqueAngularProblem& p, const Interval& range,
                        const std::string& source) {
  if (!std::isfinite(range.lo) || !std::isfinite(range.hi) || range.hi < range.lo)
    throw std::invalid_argument("eigenvalues_in: bounded interval required");
  EigenSet es;
  es.source = source;
  Interval q = Interval::closed(range.lo, range.hi);
  if (q.contains(0.0)) es.values.push_back(0.0);
  if (source == "formula") {
    double Phi = p.Phi();
    int m_lo = static_cast<int>(std::ceil((range.lo * p.omega_star + Phi) / M_PI)) - 1;
    int m_hi = static_cast<int>(std::floor((range.hi * p.omega_star + Phi) / M_PI)) + 1;
    for (int m = m_lo; m <= m_hi; ++m) {
      double l = p.lambda(m);
      if (q.contains(l)) es.values.push_back(l);
    }
  } else if (source == "determinant") {
    const double step = 0.01;
    int count = static_cast<int>(std::ceil((range.hi - range.lo) / step));
    auto f = [&](double l) { return reduced_determinant(p, l); };
    double x0 = range.lo, f0 = f(x0);
    if (f0 == 0.0) es.values.push_back(x0);
    for (int k = 1; k <= count; ++k) {
      double x1 = std::min(range.hi, range.lo + k * step);
      double f1 = f(x1);
      if (f1 == 0.0) {
        es.values.push_back(x1);
      } else if (f0 != 0.0 && (f0 > 0) != (f1 > 0)) {
        double a = x0, b = x1, fa = f0;
        while (b - a > 1e-12) {
          double m = 0.5 * (a + b), fm = f(m);
          if (fm == 0.0) {
            a = b = m;
            break;
          }
          if ((fm > 0) == (fa > 0)) {
            a = m;
            fa = fm;
          } else {
            b = m;
          }
        }
        es.values.push_back(0.5 * (a + b));
      }
      x0 = x1;
      f0 = f1;
    }
  } else {
    throw std::invalid_argument("eigenvalues_in: source must be 'formula' or 'determinant'");
  }
  finish(es.values);
  return es;
}

Interval admissible_sigma(const ObliqueAngularProblem& p) {
  double edge = -p.Phi() / p.omega_star;
  if (edge == 0.0) return Interval::none();
  return edge < 0.0 ? Interval::open(edge, 0.0) : Interval::open(0.0, edge);
}

double shifted_2d_lambda(const BackgroundShock& bg, int m) {
  StabilityExponents e = stability_exponents(bg);
  return 1.0 + (m * M_PI + e.phi_s) / e.omega_s;
}

EigenSet shifted_2d_eigenset(const BackgroundShock& bg, const Interval& range) {
  if (bg.n != 2) throw std::invalid_argument("shifted_2d_eigenset: planar background required");
  StabilityExponents e = stability_exponents(bg);
  EigenSet es;
  es.source = "formula";
  Interval q = Interval::closed(range.lo, range.hi);
  if (q.contains(0.0)) es.values.push_back(0.0);
  int m_lo = static_cast<int>(std::floor(((range.lo - 1.0) * e.omega_s - e.phi_s) / M_PI)) - 1;
  int m_hi = static_cast<int>(std::ceil(((range.hi - 1.0) * e.omega_s - e.phi_s) / M_PI)) + 1;
  for (int m = m_lo; m <= m_hi; ++m) {
    double l = shifted_2d_lambda(bg, m);
    if (q.contains(l)) es.values.push_back(l);
  }
  finish(es.values);
  return es;
}

}  // namespace wedgeshock
