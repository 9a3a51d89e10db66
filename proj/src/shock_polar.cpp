#include "wedgeshock/shock_polar.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "roots.hpp"

namespace wedgeshock {

std::string to_string(Regime r) {
  switch (r) {
    case Regime::weak_transonic: return "weak_transonic";
    case Regime::weak_supersonic: return "weak_supersonic";
    case Regime::strong_transonic: return "strong_transonic";
    case Regime::critical: return "critical";
  }
  return "unknown";
}

double shock_function(const GasModel& gas, const Eigen::VectorXd& dphi,
                      const Eigen::VectorXd& dphi_minus) {
  Eigen::VectorXd w = dphi_minus - dphi;
  double rho = density(gas, w.squaredNorm());
  double rho_m = density(gas, dphi_minus.squaredNorm());
  return dphi.dot(rho * w - rho_m * dphi_minus);
}

Eigen::VectorXd shock_function_gradient(const GasModel& gas, const Eigen::VectorXd& dphi,
                                        const Eigen::VectorXd& dphi_minus) {
  Eigen::VectorXd w = dphi_minus - dphi;
  double q_sq = w.squaredNorm();
  double rho = density(gas, q_sq);
  double drho = density_derivative(gas, q_sq);
  double rho_m = density(gas, dphi_minus.squaredNorm());
  return rho * w - rho_m * dphi_minus - rho * dphi - 2.0 * drho * w.dot(dphi) * w;
}

Eigen::VectorXd polar_normal(const GasModel& gas, const Eigen::VectorXd& v,
                             const Eigen::VectorXd& u) {
  if (v.size() != u.size()) throw std::invalid_argument("polar_normal: dimension mismatch");
  return shock_function_gradient(gas, u - v, u);
}

ShockPolar::ShockPolar(const GasModel& gas, double q0, double w_t, int n)
    : gas_(gas), q0_(q0), w_t_(w_t), n_(n) {
  if (n_ < 2) throw std::invalid_argument("ShockPolar: dimension must be >= 2");
  if (n_ == 2 && w_t_ != 0.0)
    throw std::invalid_argument("ShockPolar: edge-tangential speed requires n >= 3");
  double wt2 = w_t_ * w_t_;
  if (!(q0_ > 0.0) || q0_ * q0_ + wt2 >= gas_.q_max_sq())
    throw std::domain_error("ShockPolar: upstream speed outside (0, q_max)");
  // maximal mass flux rho(v^2 + w_t^2) v occurs at v^2 = q_cr^2 (1 - (gamma-1)/2 w_t^2)
  double v_flux_max = std::sqrt(gas_.q_cr_sq() * (1.0 - 0.5 * (gas_.gamma - 1.0) * wt2));
  if (!(q0_ > v_flux_max))
    throw std::domain_error("ShockPolar: upstream normal speed is not supersonic");
  rho_minus_ = density(gas_, q0_ * q0_ + wt2);

  double flux = rho_minus_ * q0_;
  v1_normal_ = detail::bisect_secant(
      [&](double v) { return density(gas_, v * v + wt2) * v - flux; }, 0.0, v_flux_max, 1e-15,
      "ShockPolar: normal shock");

  // sampled deflection, golden section, then tangency polish v.grad F = 0
  const int samples = 400;
  int best = 0;
  double best_theta = -1.0;
  for (int i = 0; i <= samples; ++i) {
    double v1 = v1_normal_ + (q0_ - v1_normal_) * i / samples;
    double th = deflection(v1);
    if (th > best_theta) {
      best_theta = th;
      best = i;
    }
  }
  double h = (q0_ - v1_normal_) / samples;
  double lo = std::max(v1_normal_, v1_normal_ + (best - 1) * h);
  double hi = std::min(q0_, v1_normal_ + (best + 1) * h);
  double v1g = detail::golden_max([&](double v) { return deflection(v); }, lo, hi, 1e-10);

  auto tangency = [&](double v1) {
    double v2 = transverse_speed(v1);
    double q_sq = v1 * v1 + v2 * v2;
    double rho = density(gas_, q_sq + wt2);
    double drho = density_derivative(gas_, q_sq + wt2);
    double core = q0_ * v1 - q_sq;
    double f1 = 2.0 * v1 * drho * core + (rho + rho_minus_) * q0_ - 2.0 * rho * v1;
    double f2 = 2.0 * v2 * drho * core - 2.0 * rho * v2;
    return v1 * f1 + v2 * f2;
  };
  v1_crit_ = v1g;
  double a = std::max(v1_normal_, v1g - 1e-6), b = std::min(q0_, v1g + 1e-6);
  double ga = tangency(a), gb = tangency(b);
  if ((ga > 0) != (gb > 0)) v1_crit_ = detail::bisect_secant(tangency, a, b, 0.0, "tangency");
  theta_crit_ = deflection(v1_crit_);
}

double ShockPolar::residual(double v1, double v2) const {
  double q_sq = v1 * v1 + v2 * v2;
  double rho = density(gas_, q_sq + w_t_ * w_t_);
  return (rho + rho_minus_) * q0_ * v1 - rho * q_sq - rho_minus_ * q0_ * q0_;
}

double ShockPolar::transverse_speed(double v1) const {
  const double slack = 1e-13 * q0_;
  if (v1 < v1_normal_ - slack || v1 > q0_ + slack)
    throw std::domain_error("polar_transverse_speed: v1 outside [v1_normal, q0]");
  v1 = std::clamp(v1, v1_normal_, q0_);
  double s_hi = q0_ * v1 - v1 * v1;
  if (s_hi <= 0.0) return 0.0;
  auto f = [&](double s) { return residual(v1, std::sqrt(s)); };
  if (f(0.0) <= 0.0) return 0.0;
  double s = detail::bisect_secant(f, 0.0, s_hi, 1e-15, "polar_transverse_speed");
  return std::sqrt(s);
}

double ShockPolar::deflection(double v1) const {
  return std::atan2(transverse_speed(v1), v1);
}

PolarPoint ShockPolar::point(double v1) const {
  PolarPoint p;
  p.v1 = v1;
  p.v2 = transverse_speed(v1);
  p.v_t = Eigen::VectorXd::Zero(n_ - 2);
  if (n_ > 2) p.v_t(0) = w_t_;
  p.q = std::sqrt(v1 * v1 + p.v2 * p.v2 + w_t_ * w_t_);
  p.rho = density(gas_, p.q * p.q);
  return p;
}

WedgeSolutions ShockPolar::wedge_solutions(double theta_w) const {
  if (!(theta_w >= 0.0) || theta_w >= 0.5 * M_PI)
    throw std::invalid_argument("wedge_solutions: theta_w must lie in [0, pi/2)");
  WedgeSolutions ws;
  ws.critical_angle = theta_crit_;
  if (theta_w > theta_crit_ + 1e-14) {
    ws.detached = true;
    return ws;
  }
  if (theta_w == 0.0) {
    ws.strong = point(v1_normal_);
    ws.weak = point(q0_);
    return ws;
  }
  if (theta_w >= theta_crit_ - 1e-14) {
    ws.strong = ws.weak = point(v1_crit_);
    return ws;
  }
  auto g = [&](double v1) { return deflection(v1) - theta_w; };
  ws.strong = point(detail::bisect_secant(g, v1_normal_, v1_crit_, 0.0, "wedge_solutions"));
  ws.weak = point(detail::bisect_secant(g, q0_, v1_crit_, 0.0, "wedge_solutions"));
  return ws;
}

Regime ShockPolar::classify(const PolarPoint& p) const {
  if (std::abs(p.v1 - v1_crit_) <= 1e-9) return Regime::critical;
  if (p.v1 < v1_crit_) return Regime::strong_transonic;
  return p.q < gas_.q_cr() ? Regime::weak_transonic : Regime::weak_supersonic;
}

Eigen::VectorXd ShockPolar::upstream() const {
  Eigen::VectorXd u = Eigen::VectorXd::Zero(n_);
  u(0) = q0_;
  if (n_ > 2) u(2) = w_t_;
  return u;
}

Eigen::VectorXd ShockPolar::downstream(const PolarPoint& p) const {
  Eigen::VectorXd v = Eigen::VectorXd::Zero(n_);
  v(0) = p.v1;
  v(1) = p.v2;
  for (int j = 0; j < p.v_t.size(); ++j) v(2 + j) = p.v_t(j);
  return v;
}

Eigen::VectorXd ShockPolar::normal_wedge_frame(const PolarPoint& p) const {
  Eigen::VectorXd nu = polar_normal(gas_, downstream(p), upstream());
  double th = std::atan2(p.v2, p.v1);
  double c = std::cos(th), s = std::sin(th);
  Eigen::VectorXd out = nu;
  out(0) = c * nu(0) + s * nu(1);
  out(1) = -s * nu(0) + c * nu(1);
  return out;
}

std::vector<PolarPoint> ShockPolar::sample(int count) const {
  if (count < 2) throw std::invalid_argument("ShockPolar::sample: count must be >= 2");
  std::vector<PolarPoint> out;
  out.reserve(count);
  for (int i = 0; i < count; ++i) {
    double s = 0.5 * (1.0 - std::cos(M_PI * i / (count - 1)));
    out.push_back(point(v1_normal_ + (q0_ - v1_normal_) * s));
  }
  return out;
}

double polar_transverse_speed(const GasModel& gas, double q0, double v1) {
  return ShockPolar(gas, q0).transverse_speed(v1);
}

WedgeSolutions wedge_solutions(const GasModel& gas, double q0, double theta_w) {
  return ShockPolar(gas, q0).wedge_solutions(theta_w);
}

double critical_angle(const GasModel& gas, double q0) {
  return ShockPolar(gas, q0).critical_angle();
}

}  // namespace wedgeshock
