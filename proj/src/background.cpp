#include "wedgeshock/background.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace wedgeshock {

std::string to_string(Branch b) { return b == Branch::weak ? "weak" : "strong"; }

Branch branch_from_string(const std::string& s) {
  if (s == "weak") return Branch::weak;
  if (s == "strong") return Branch::strong;
  throw std::invalid_argument("branch must be 'weak' or 'strong', got '" + s + "'");
}

double BackgroundShock::front_denominator() const {
  return q0_minus * std::cos(alpha_w) - q0_plus * std::cos(omega1);
}

double BackgroundShock::governing_sigma() const {
  if (!exponents) throw DegenerateEllipticity("governing_sigma: background is not transonic");
  return exponents->sigma_s_tilde;
}
double BackgroundShock::governing_omega() const {
  if (!exponents) throw DegenerateEllipticity("governing_omega: background is not transonic");
  return exponents->omega_s_tilde;
}
double BackgroundShock::governing_phi() const {
  if (!exponents) throw DegenerateEllipticity("governing_phi: background is not transonic");
  return exponents->phi_s_tilde;
}

namespace {

StabilityExponents compute_exponents(const BackgroundShock& bg) {
  double M = bg.mach_plus;
  if (!(M < 1.0))
    throw DegenerateEllipticity("stability_exponents: downstream state is not subsonic (M = " +
                                std::to_string(M) + ")");
  double d = bg.front_denominator();
  double ratio = bg.nu(0) / bg.nu(1);
  double s_perp = std::sqrt(1.0 - M * M);
  double c1 = std::cos(bg.omega1);
  double s_skew = std::sqrt(1.0 - M * M * c1 * c1);
  double base = d / (bg.q0_minus * std::sin(bg.alpha_w));

  StabilityExponents e;
  e.omega_s = std::atan(base * s_perp);
  e.phi_s = std::atan(ratio / s_perp);
  e.sigma_s = e.phi_s / e.omega_s;
  e.omega_s_tilde = std::atan(base * s_skew);
  e.phi_s_tilde = std::atan(ratio / s_skew);
  e.sigma_s_tilde = e.phi_s_tilde / e.omega_s_tilde;
  e.psi = std::atan2(bg.nu(1), bg.nu(0));
  return e;
}

CanonicalTransforms compute_transforms(const BackgroundShock& bg) {
  int n = bg.n;
  double M = bg.mach_plus;
  if (!(M < 1.0)) throw DegenerateEllipticity("canonical_transforms: sonic or supersonic downstream");
  Eigen::MatrixXd J0inv = bg.J0.inverse();
  if (!J0inv.allFinite()) throw std::logic_error("canonical_transforms: singular J0");
  CanonicalTransforms ct;
  ct.P0 = Eigen::MatrixXd::Identity(n, n);
  if (!bg.skew()) {
    double c2 = sound_speed_sq(bg.gas(), bg.q0_plus * bg.q0_plus);
    // A0 = c^2 diag(1 - M^2, 1, ..., 1) in this frame
    Eigen::MatrixXd a_inv_half = Eigen::MatrixXd::Identity(n, n) / std::sqrt(c2);
    a_inv_half(0, 0) /= std::sqrt(1.0 - M * M);
    ct.P = a_inv_half * J0inv.transpose();
  } else {
    ct.P = J0inv.transpose();
    double c1 = std::cos(bg.omega1), c3 = std::cos(bg.omega3);
    double a = std::sqrt(1.0 - M * M * c1 * c1), b = std::sqrt(1.0 - M * M);
    ct.P0(0, 0) = 1.0 / a;
    ct.P0(2, 0) = M * M * c1 * c3 / (a * b);
    ct.P0(2, 2) = a / b;
  }
  return ct;
}

}  // namespace

BackgroundShock solve_background(double gamma, double q0_minus, double alpha_w,
                                 double u03_minus, Branch branch, int n) {
  if (n == 0) n = (u03_minus == 0.0) ? 2 : 3;
  if (n < 2) throw std::invalid_argument("solve_background: n must be >= 2");
  if (n == 2 && u03_minus != 0.0)
    throw std::invalid_argument("solve_background: u03_minus requires n >= 3");
  if (!(alpha_w > 0.0) || alpha_w >= 0.5 * M_PI)
    throw std::invalid_argument("solve_background: alpha_w must lie in (0, pi/2)");

  GasModel gas(gamma);
  ShockPolar polar(gas, q0_minus, u03_minus, n);
  WedgeSolutions ws = polar.wedge_solutions(alpha_w);
  if (ws.detached)
    throw DetachedWedge("solve_background: wedge angle exceeds the critical angle " +
                        std::to_string(ws.critical_angle) + " rad (detached shock)");
  const PolarPoint& pt = branch == Branch::weak ? ws.weak : ws.strong;

  BackgroundShock bg;
  bg.n = n;
  bg.gamma = gamma;
  bg.alpha_w = alpha_w;
  bg.q0_minus = q0_minus;
  bg.u03_minus = u03_minus;
  bg.branch = branch;
  bg.regime = polar.classify(pt);
  double q_perp = std::hypot(pt.v1, pt.v2);
  bg.q0_plus = std::sqrt(q_perp * q_perp + u03_minus * u03_minus);
  bg.omega1 = std::acos(std::clamp(q_perp / bg.q0_plus, -1.0, 1.0));
  bg.omega3 = std::acos(std::clamp(u03_minus / bg.q0_plus, -1.0, 1.0));
  bg.mach_plus = mach(gas, bg.q0_plus);
  bg.transonic = bg.q0_plus < gas.q_cr();

  bg.U_minus = Eigen::VectorXd::Zero(n);
  bg.U_minus(0) = q0_minus * std::cos(alpha_w);
  bg.U_minus(1) = -q0_minus * std::sin(alpha_w);
  if (n > 2) bg.U_minus(2) = u03_minus;
  bg.U_plus = Eigen::VectorXd::Zero(n);
  bg.U_plus(0) = bg.q0_plus * std::cos(bg.omega1);
  if (n > 2) bg.U_plus(2) = bg.q0_plus * std::cos(bg.omega3);
  bg.dphi0 = bg.U_minus - bg.U_plus;
  bg.nu = shock_function_gradient(gas, bg.dphi0, bg.U_minus);
  bg.A0 = coefficient_matrix(gas, bg.U_plus);

  double d = bg.front_denominator();
  if (!(d > 0.0)) throw std::logic_error("solve_background: nonpositive front denominator");
  bg.du0 = Eigen::VectorXd::Zero(n);
  bg.du0(0) = 1.0 / d;
  bg.du0(1) = q0_minus * std::sin(alpha_w) / d;
  bg.J0 = Eigen::MatrixXd::Identity(n, n) / d;
  bg.J0(0, 0) = 1.0;
  bg.J0(1, 0) = -bg.du0(1);

  if (bg.transonic) {
    bg.exponents = compute_exponents(bg);
    bg.transforms = compute_transforms(bg);
  }
  return bg;
}

StabilityExponents stability_exponents(const BackgroundShock& bg) {
  if (bg.exponents) return *bg.exponents;
  return compute_exponents(bg);
}

CanonicalTransforms canonical_transforms(const BackgroundShock& bg) {
  if (bg.transforms) return *bg.transforms;
  return compute_transforms(bg);
}

WeightWindow admissible_weights(const BackgroundShock& bg, int dim) {
  StabilityExponents e = stability_exponents(bg);
  WeightWindow w;
  if (dim >= 3) {
    double s = e.sigma_s_tilde;
    if (!(s > 0.0)) return {Interval::none(), Interval::none()};
    w.sigma_inf = {-1.0, 0.0, false, true};
    w.sigma0 = Interval::open(0.0, s);
    return w;
  }
  if (dim != 2) throw std::invalid_argument("admissible_weights: dim must be >= 2");
  double s = e.sigma_s;
  if (s > 0.0) {
    w.sigma_inf = {-1.0, 0.0, false, true};
    w.sigma0 = {0.0, s, true, false};
  } else {
    w.sigma_inf = {std::max(-1.0, s), 0.0, false, true};
    w.sigma0 = {0.0, M_PI / e.omega_s + s, true, false};
  }
  return w;
}

double background_residual(const BackgroundShock& bg, int samples, unsigned seed) {
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> uni(-3.0, 3.0);
  GasModel gas = bg.gas();
  double worst = std::abs(shock_function(gas, bg.dphi0, bg.U_minus));
  double slope = bg.front_denominator() / (bg.q0_minus * std::sin(bg.alpha_w));
  for (int k = 0; k < samples; ++k) {
    Eigen::VectorXd x(bg.n);
    for (int i = 0; i < bg.n; ++i) x(i) = uni(rng);
    x(1) = slope * x(0);
    double defect = std::abs(bg.phi0_minus(x) - bg.phi0_plus(x)) / std::max(1.0, x.norm());
    worst = std::max(worst, defect);
  }
  return worst;
}

}  // namespace wedgeshock
