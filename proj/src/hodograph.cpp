#include "wedgeshock/hodograph.hpp"

#include <cmath>
#include <stdexcept>

namespace wedgeshock {

// ---------------------------------------------------------------- perturbation

double WedgePerturbation::value(double x1) const {
  return amplitude * x1 * x1 * std::exp(-x1);
}
double WedgePerturbation::d1(double x1) const {
  return amplitude * (2.0 * x1 - x1 * x1) * std::exp(-x1);
}
double WedgePerturbation::d2(double x1) const {
  return amplitude * (2.0 - 4.0 * x1 + x1 * x1) * std::exp(-x1);
}

namespace {
double bump(const Eigen::VectorXd& x, double w) {
  double s = 0.0;
  for (int j = 1; j < x.size(); ++j) s += x(j) * x(j);
  return std::exp(-s / (w * w));
}
}  // namespace

double WedgePerturbation::value(const Eigen::VectorXd& x) const {
  return value(x(0)) * bump(x, bump_width);
}

Eigen::VectorXd WedgePerturbation::gradient(const Eigen::VectorXd& x) const {
  int m = static_cast<int>(x.size());
  double b = bump(x, bump_width), w2 = bump_width * bump_width;
  Eigen::VectorXd g(m);
  g(0) = d1(x(0)) * b;
  for (int j = 1; j < m; ++j) g(j) = value(x(0)) * (-2.0 * x(j) / w2) * b;
  return g;
}

Eigen::MatrixXd WedgePerturbation::hessian(const Eigen::VectorXd& x) const {
  int m = static_cast<int>(x.size());
  double b = bump(x, bump_width), w2 = bump_width * bump_width;
  double f = value(x(0)), f1 = d1(x(0)), f2 = d2(x(0));
  Eigen::MatrixXd h(m, m);
  h(0, 0) = f2 * b;
  for (int j = 1; j < m; ++j) {
    h(0, j) = h(j, 0) = f1 * (-2.0 * x(j) / w2) * b;
    for (int k = 1; k < m; ++k)
      h(j, k) = f * (4.0 * x(j) * x(k) / (w2 * w2) - (j == k ? 2.0 / w2 : 0.0)) * b;
  }
  return h;
}

// ---------------------------------------------------------------- pointwise maps

namespace {
void check_inputs(const Eigen::VectorXd& du, const Eigen::VectorXd& dphi_w, const char* who) {
  if (du.size() < 2 || dphi_w.size() != du.size() - 1)
    throw std::invalid_argument(std::string(who) + ": expected n and n-1 entries");
  if (du(0) == 0.0) throw std::domain_error(std::string(who) + ": d_{y1} u = 0, map not invertible");
}
}  // namespace

Eigen::VectorXd velocity_from_u(const Eigen::VectorXd& du, const Eigen::VectorXd& dphi_w) {
  check_inputs(du, dphi_w, "velocity_from_u");
  int n = static_cast<int>(du.size());
  double u1 = du(0), u2 = du(1), p1 = dphi_w(0);
  Eigen::VectorXd v(n);
  v(0) = 1.0 + p1 * u2;
  v(1) = -u2;
  for (int j = 2; j < n; ++j) v(j) = -du(j) + dphi_w(j - 1) * u2;
  return v / u1;
}

Eigen::MatrixXd jacobian_J(const Eigen::VectorXd& du, const Eigen::VectorXd& dphi_w) {
  check_inputs(du, dphi_w, "jacobian_J");
  int n = static_cast<int>(du.size());
  double u1 = du(0), u2 = du(1), p1 = dphi_w(0);
  Eigen::MatrixXd J = Eigen::MatrixXd::Zero(n, n);
  J(0, 0) = 1.0 + p1 * u2;
  J(0, 1) = -p1 * u1;
  J(1, 0) = -u2;
  J(1, 1) = u1;
  for (int j = 2; j < n; ++j) {
    double pj = dphi_w(j - 1);
    J(j, 0) = -du(j) + pj * u2;
    J(j, 1) = -pj * u1;
    J(j, j) = u1;
  }
  return J;
}

Eigen::MatrixXd inverse_map_jacobian(const Eigen::VectorXd& du, const Eigen::VectorXd& dphi_w) {
  check_inputs(du, dphi_w, "inverse_map_jacobian");
  int n = static_cast<int>(du.size());
  double p1 = dphi_w(0);
  Eigen::MatrixXd X = Eigen::MatrixXd::Identity(n, n);
  X.row(0) = du.transpose();
  X.row(1) = p1 * du.transpose();
  X(1, 1) += 1.0;
  for (int j = 2; j < n; ++j) X(1, j) += dphi_w(j - 1);
  return X;
}

Eigen::MatrixXd coefficients(const GasModel& gas, const Eigen::VectorXd& du,
                             const Eigen::VectorXd& dphi_minus, const Eigen::VectorXd& dphi_w) {
  Eigen::VectorXd dphi = velocity_from_u(du, dphi_w);
  Eigen::MatrixXd A = coefficient_matrix(gas, dphi_minus - dphi);
  Eigen::MatrixXd J = jacobian_J(du, dphi_w);
  return J.transpose() * A * J;
}

Eigen::MatrixXd phi_w_jacobian_term(const Eigen::VectorXd& du, const Eigen::VectorXd& dphi_w,
                                    const Eigen::MatrixXd& d2phi_w) {
  check_inputs(du, dphi_w, "phi_w_jacobian_term");
  int n = static_cast<int>(du.size());
  // W(:, a): derivative of phi_w's gradient in x_a, placed in the n-vector slots (1, -, 3, ..., n)
  Eigen::MatrixXd W = Eigen::MatrixXd::Zero(n, n - 1);
  for (int a = 0; a < n - 1; ++a) {
    W(0, a) = d2phi_w(0, a);
    for (int j = 2; j < n; ++j) W(j, a) = d2phi_w(j - 1, a);
  }
  Eigen::MatrixXd B = W.col(0) * du.transpose();
  for (int a = 1; a < n - 1; ++a) B.col(a + 1) += W.col(a);
  double u1 = du(0), u2 = du(1);
  return (u2 / (u1 * u1)) * B * jacobian_J(du, dphi_w).transpose();
}

double source_Phi_w(const GasModel& gas, const Eigen::MatrixXd& d2phi_w, const Eigen::VectorXd& du,
                    const Eigen::VectorXd& dphi_w, const Eigen::VectorXd& dphi_minus) {
  Eigen::VectorXd dphi = velocity_from_u(du, dphi_w);
  Eigen::MatrixXd A = coefficient_matrix(gas, dphi_minus - dphi);
  return (A * phi_w_jacobian_term(du, dphi_w, d2phi_w)).trace();
}

Eigen::MatrixXd hessian_phi(const Eigen::VectorXd& du, const Eigen::MatrixXd& d2u,
                            const Eigen::VectorXd& dphi_w, const Eigen::MatrixXd& d2phi_w) {
  Eigen::MatrixXd J = jacobian_J(du, dphi_w);
  double u1 = du(0);
  return -(1.0 / (u1 * u1 * u1)) * J * d2u * J.transpose() +
         phi_w_jacobian_term(du, dphi_w, d2phi_w);
}

BoundaryResiduals boundary_G(const Eigen::VectorXd& du, const Eigen::VectorXd& dphi_w,
                             const Eigen::VectorXd& dphi_minus, const GasModel& gas) {
  check_inputs(du, dphi_w, "boundary_G");
  int n = static_cast<int>(du.size());
  double p1 = dphi_w(0);
  double coef = p1 * dphi_minus(0) - dphi_minus(1);
  double tang = 0.0;
  for (int j = 2; j < n; ++j) {
    coef += dphi_w(j - 1) * dphi_minus(j);
    tang += dphi_w(j - 1) * du(j);
  }
  BoundaryResiduals r;
  r.G1 = coef * du(0) - (1.0 + dphi_w.squaredNorm()) * du(1) + tang - p1;
  r.G2 = shock_function(gas, velocity_from_u(du, dphi_w), dphi_minus);
  return r;
}

LinearizedBoundary linearized_boundary(const BackgroundShock& bg) {
  LinearizedBoundary lb;
  int n = bg.n;
  // G1 is linear in Du at dphi_w = 0
  lb.b1 = Eigen::VectorXd::Zero(n);
  lb.b1(0) = -bg.U_minus(1);
  lb.b1(1) = -1.0;
  double u1 = bg.du0(0);
  lb.b2 = -(1.0 / (u1 * u1)) * bg.J0.transpose() * bg.nu;
  return lb;
}

double transformed_residual(const BackgroundShock& bg, const WedgePerturbation& pert, double u,
                            const Eigen::VectorXd& du, const Eigen::MatrixXd& d2u,
                            const Eigen::VectorXd& y_prime) {
  int n = static_cast<int>(du.size());
  Eigen::VectorXd x(n - 1);
  x(0) = u;
  for (int j = 0; j < n - 2; ++j) x(j + 1) = y_prime(j);
  Eigen::VectorXd dphi_w = pert.gradient(x);
  Eigen::MatrixXd d2phi_w = pert.hessian(x);
  GasModel gas = bg.gas();
  Eigen::MatrixXd At = coefficients(gas, du, bg.U_minus, dphi_w);
  double u1 = du(0);
  return -(1.0 / (u1 * u1 * u1)) * (At.cwiseProduct(d2u)).sum() +
         source_Phi_w(gas, d2phi_w, du, dphi_w, bg.U_minus);
}

Eigen::VectorXd inverse_hodograph(const Eigen::VectorXd& y, double u, const WedgePerturbation& pert) {
  int n = static_cast<int>(y.size());
  Eigen::VectorXd xw(n - 1);
  xw(0) = u;
  for (int j = 2; j < n; ++j) xw(j - 1) = y(j);
  Eigen::VectorXd x = y;
  x(0) = u;
  x(1) = y(1) + pert.value(xw);
  return x;
}

Eigen::VectorXd forward_hodograph(const Eigen::VectorXd& x, double phi,
                                  const WedgePerturbation& pert) {
  int n = static_cast<int>(x.size());
  Eigen::VectorXd xw(n - 1);
  xw(0) = x(0);
  for (int j = 2; j < n; ++j) xw(j - 1) = x(j);
  Eigen::VectorXd y = x;
  y(0) = phi;
  y(1) = x(1) - pert.value(xw);
  return y;
}

// ---------------------------------------------------------------- quarter-plane grid

namespace {
// first derivative along an index direction with second-order stencils
double diff1(const Eigen::MatrixXd& u, int i, int j, int axis, double h) {
  int n = axis == 0 ? static_cast<int>(u.rows()) : static_cast<int>(u.cols());
  int k = axis == 0 ? i : j;
  auto at = [&](int m) { return axis == 0 ? u(m, j) : u(i, m); };
  if (k == 0) return (-3.0 * at(0) + 4.0 * at(1) - at(2)) / (2.0 * h);
  if (k == n - 1) return (3.0 * at(n - 1) - 4.0 * at(n - 2) + at(n - 3)) / (2.0 * h);
  return (at(k + 1) - at(k - 1)) / (2.0 * h);
}
double diff2(const Eigen::MatrixXd& u, int i, int j, int axis, double h) {
  int n = axis == 0 ? static_cast<int>(u.rows()) : static_cast<int>(u.cols());
  int k = axis == 0 ? i : j;
  auto at = [&](int m) { return axis == 0 ? u(m, j) : u(i, m); };
  if (k == 0) return (2.0 * at(0) - 5.0 * at(1) + 4.0 * at(2) - at(3)) / (h * h);
  if (k == n - 1) return (2.0 * at(n - 1) - 5.0 * at(n - 2) + 4.0 * at(n - 3) - at(n - 4)) / (h * h);
  return (at(k + 1) - 2.0 * at(k) + at(k - 1)) / (h * h);
}
}  // namespace

Eigen::Vector2d HodographField::gradient(int i, int j) const {
  return {diff1(u, i, j, 0, h1), diff1(u, i, j, 1, h2)};
}

Eigen::Matrix2d HodographField::hessian(int i, int j) const {
  Eigen::Matrix2d H;
  H(0, 0) = diff2(u, i, j, 0, h1);
  H(1, 1) = diff2(u, i, j, 1, h2);
  // mixed derivative: differentiate the y2-derivative along y1
  int n1v = n1();
  auto d2_at = [&](int m) { return diff1(u, m, j, 1, h2); };
  double mixed;
  if (i == 0) mixed = (-3.0 * d2_at(0) + 4.0 * d2_at(1) - d2_at(2)) / (2.0 * h1);
  else if (i == n1v - 1) mixed = (3.0 * d2_at(i) - 4.0 * d2_at(i - 1) + d2_at(i - 2)) / (2.0 * h1);
  else mixed = (d2_at(i + 1) - d2_at(i - 1)) / (2.0 * h1);
  H(0, 1) = H(1, 0) = mixed;
  return H;
}

HodographField background_field(const BackgroundShock& bg, double h1, double h2, int n1, int n2) {
  if (bg.n != 2) throw std::invalid_argument("background_field: grid fields are planar (n = 2)");
  if (n1 < 4 || n2 < 4) throw std::invalid_argument("background_field: need at least 4 nodes per axis");
  HodographField f;
  f.background = bg;
  f.h1 = h1;
  f.h2 = h2;
  f.u.resize(n1, n2);
  for (int i = 0; i < n1; ++i)
    for (int j = 0; j < n2; ++j) f.u(i, j) = bg.du0(0) * i * h1 + bg.du0(1) * j * h2;
  return f;
}

Eigen::MatrixXd residual_interior(const HodographField& field, const WedgePerturbation& pert) {
  Eigen::MatrixXd r(field.n1(), field.n2());
  Eigen::VectorXd none(0);
  for (int i = 0; i < field.n1(); ++i)
    for (int j = 0; j < field.n2(); ++j)
      r(i, j) = transformed_residual(field.background, pert, field.u(i, j), field.gradient(i, j),
                                     field.hessian(i, j), none);
  return r;
}

double edge_condition_check(const HodographField& field, const WedgePerturbation&) {
  Eigen::Vector2d d = field.gradient(0, 0);
  d(0) -= field.background.du0(0);
  d(1) -= field.background.du0(1);
  return d.norm();
}

}  // namespace wedgeshock
