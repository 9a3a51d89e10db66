#include "wedgeshock/gas.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace wedgeshock {

GasModel::GasModel(double gamma_) : gamma(gamma_) {
  if (!(gamma > 1.0) || !std::isfinite(gamma))
    throw std::invalid_argument("GasModel: gamma must be finite and > 1");
}

double GasModel::q_max() const { return std::sqrt(q_max_sq()); }
double GasModel::q_cr() const { return std::sqrt(q_cr_sq()); }

namespace {
void check_range(const GasModel& gas, double q_sq, const char* who) {
  if (!(q_sq >= 0.0) || q_sq > gas.q_max_sq())
    throw std::domain_error(std::string(who) + ": q^2 = " + std::to_string(q_sq) +
                            " outside [0, q_max^2]");
}
}  // namespace

double sound_speed_sq(const GasModel& gas, double q_sq) {
  check_range(gas, q_sq, "sound_speed_sq");
  return std::max(0.0, 1.0 - 0.5 * (gas.gamma - 1.0) * q_sq);
}

double density(const GasModel& gas, double q_sq) {
  check_range(gas, q_sq, "density");
  return std::pow(std::max(0.0, 1.0 - 0.5 * (gas.gamma - 1.0) * q_sq), 1.0 / (gas.gamma - 1.0));
}

double density_derivative(const GasModel& gas, double q_sq) {
  double c2 = sound_speed_sq(gas, q_sq);
  if (c2 <= 0.0) throw std::domain_error("density_derivative: vanishing sound speed");
  return -0.5 * density(gas, q_sq) / c2;
}

double mach(const GasModel& gas, double q) {
  double c2 = sound_speed_sq(gas, q * q);
  if (c2 <= 0.0) throw std::domain_error("mach: vanishing sound speed");
  return std::abs(q) / std::sqrt(c2);
}

double mach(const GasModel& gas, const Eigen::VectorXd& v) { return mach(gas, v.norm()); }

Eigen::MatrixXd coefficient_matrix(const GasModel& gas, const Eigen::VectorXd& dphi) {
  double q_sq = dphi.squaredNorm();
  if (q_sq >= gas.q_max_sq())
    throw std::domain_error("coefficient_matrix: |Dphi| >= q_max");
  double c2 = sound_speed_sq(gas, q_sq);
  Eigen::MatrixXd a = -dphi * dphi.transpose();
  a.diagonal().array() += c2;
  return a;
}

}  // namespace wedgeshock
