// Shock polar (2-D) and shock balloon (M-D) for potential flow.
#pragma once

#include <string>
#include <vector>

#include <Eigen/Dense>

#include "wedgeshock/gas.hpp"

namespace wedgeshock {

enum class Regime { weak_transonic, weak_supersonic, strong_transonic, critical };
std::string to_string(Regime r);

// Downstream state in the upstream-aligned frame: upstream is (q0, 0, w_t).
struct PolarPoint {
  double v1 = 0.0;
  double v2 = 0.0;
  Eigen::VectorXd v_t;  // edge-tangential components, empty in 2-D
  double q = 0.0;       // full speed |v|
  double rho = 0.0;
};

struct WedgeSolutions {
  PolarPoint strong;  // A
  PolarPoint weak;    // B
  bool detached = false;
  double critical_angle = 0.0;
};

// H_s(Dphi; Dphi^-) = Dphi . (rho(|Dphi^- - Dphi|^2)(Dphi^- - Dphi) - rho(|Dphi^-|^2) Dphi^-)
double shock_function(const GasModel& gas, const Eigen::VectorXd& dphi,
                      const Eigen::VectorXd& dphi_minus);
// gradient of H_s with respect to Dphi
Eigen::VectorXd shock_function_gradient(const GasModel& gas, const Eigen::VectorXd& dphi,
                                        const Eigen::VectorXd& dphi_minus);

// Polar normal nu for downstream velocity v behind upstream velocity u (same frame).
Eigen::VectorXd polar_normal(const GasModel& gas, const Eigen::VectorXd& v,
                             const Eigen::VectorXd& u);

// Polar of upstream speed q0 normal to the edge and edge-tangential speed w_t.
// With w_t = 0 this is the plain 2-D polar.
class ShockPolar {
 public:
  ShockPolar(const GasModel& gas, double q0, double w_t = 0.0, int n = 2);

  const GasModel& gas() const { return gas_; }
  double q0() const { return q0_; }
  double w_t() const { return w_t_; }
  int dim() const { return n_; }
  double rho_minus() const { return rho_minus_; }

  // (rho + rho^-) q0 v1 - rho q^2 - rho^- q0^2
  double residual(double v1, double v2) const;
  double transverse_speed(double v1) const;
  double normal_shock_v1() const { return v1_normal_; }
  double deflection(double v1) const;
  double critical_v1() const { return v1_crit_; }
  double critical_angle() const { return theta_crit_; }

  PolarPoint point(double v1) const;
  WedgeSolutions wedge_solutions(double theta_w) const;
  Regime classify(const PolarPoint& p) const;

  Eigen::VectorXd upstream() const;                // (q0, 0, w_t, 0...)
  Eigen::VectorXd downstream(const PolarPoint& p) const;
  // nu rotated into the wedge-aligned frame (downstream along x1)
  Eigen::VectorXd normal_wedge_frame(const PolarPoint& p) const;

  // upper half of the polar from the normal shock to q0
  std::vector<PolarPoint> sample(int count) const;

 private:
  GasModel gas_;
  double q0_, w_t_;
  int n_;
  double rho_minus_;
  double v1_normal_ = 0.0, v1_crit_ = 0.0, theta_crit_ = 0.0;
};

// 2-D conveniences
double polar_transverse_speed(const GasModel& gas, double q0, double v1);
WedgeSolutions wedge_solutions(const GasModel& gas, double q0, double theta_w);
double critical_angle(const GasModel& gas, double q0);

}  // namespace wedgeshock
