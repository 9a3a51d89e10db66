// Polytropic potential-flow gas in stagnation-normalized units (c(0) = 1).
#pragma once

#include <Eigen/Dense>

namespace wedgeshock {

struct GasModel {
  double gamma;

  explicit GasModel(double gamma_);

  double q_max_sq() const { return 2.0 / (gamma - 1.0); }
  double q_cr_sq() const { return 2.0 / (gamma + 1.0); }
  double q_max() const;
  double q_cr() const;
};

// Bernoulli density rho(q^2); throws std::domain_error outside [0, q_max^2].
double density(const GasModel& gas, double q_sq);
// d rho / d(q^2)
double density_derivative(const GasModel& gas, double q_sq);
double sound_speed_sq(const GasModel& gas, double q_sq);
double mach(const GasModel& gas, const Eigen::VectorXd& v);
double mach(const GasModel& gas, double q);
// a_ij = c^2 delta_ij - phi_i phi_j
Eigen::MatrixXd coefficient_matrix(const GasModel& gas, const Eigen::VectorXd& dphi);

}  // namespace wedgeshock
