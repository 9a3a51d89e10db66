// Partial hodograph transformation y = (phi(x), x2 - phi_w(x1, x'), x').
//
// Conventions: du = D_y u (n entries); dphi_w = (d_{x1} phi_w, d_{x3} phi_w, ...)
// (n - 1 entries); d2phi_w is the matching (n-1)x(n-1) Hessian.
#pragma once

#include <array>

#include <Eigen/Dense>

#include "wedgeshock/background.hpp"

namespace wedgeshock {

// phi_w(x1, x') = amplitude * x1^2 exp(-x1) * exp(-|x'|^2 / width^2)
struct WedgePerturbation {
  int n = 2;
  double amplitude = 0.0;
  double bump_width = 2.0;
  double delta = 0.0;  // weighted-norm size, filled by the norm evaluator
  double sigma0 = 0.0;
  double sigma_inf = 0.0;

  // x = (x1, x3, ..., xn)
  double value(const Eigen::VectorXd& x) const;
  Eigen::VectorXd gradient(const Eigen::VectorXd& x) const;
  Eigen::MatrixXd hessian(const Eigen::VectorXd& x) const;

  // 2-D shortcuts in x1
  double value(double x1) const;
  double d1(double x1) const;
  double d2(double x1) const;
};

Eigen::VectorXd velocity_from_u(const Eigen::VectorXd& du, const Eigen::VectorXd& dphi_w);
Eigen::MatrixXd jacobian_J(const Eigen::VectorXd& du, const Eigen::VectorXd& dphi_w);
// d x / d y at (du, dphi_w)
Eigen::MatrixXd inverse_map_jacobian(const Eigen::VectorXd& du, const Eigen::VectorXd& dphi_w);

// Atilde = J^T A(Dphi^- - Dphi) J
Eigen::MatrixXd coefficients(const GasModel& gas, const Eigen::VectorXd& du,
                             const Eigen::VectorXd& dphi_minus, const Eigen::VectorXd& dphi_w);
// J_w = (u2/u1^2) (W1 Du^T + W' dy'/dy) J^T
Eigen::MatrixXd phi_w_jacobian_term(const Eigen::VectorXd& du, const Eigen::VectorXd& dphi_w,
                                    const Eigen::MatrixXd& d2phi_w);
// Phi_w = tr(A J_w)
double source_Phi_w(const GasModel& gas, const Eigen::MatrixXd& d2phi_w, const Eigen::VectorXd& du,
                    const Eigen::VectorXd& dphi_w, const Eigen::VectorXd& dphi_minus);
// D_x^2 phi = -(1/u1^3) J D^2u J^T + J_w
Eigen::MatrixXd hessian_phi(const Eigen::VectorXd& du, const Eigen::MatrixXd& d2u,
                            const Eigen::VectorXd& dphi_w, const Eigen::MatrixXd& d2phi_w);

struct BoundaryResiduals {
  double G1 = 0.0;  // wedge, y2 = 0
  double G2 = 0.0;  // shock, y1 = 0
};
BoundaryResiduals boundary_G(const Eigen::VectorXd& du, const Eigen::VectorXd& dphi_w,
                             const Eigen::VectorXd& dphi_minus, const GasModel& gas);

// grad_{Du} G_j(Du0; 0) for the background
struct LinearizedBoundary {
  Eigen::VectorXd b1;
  Eigen::VectorXd b2;
};
LinearizedBoundary linearized_boundary(const BackgroundShock& bg);

// -(1/u1^3) sum atilde_ij u_ij + Phi_w at one point; y' = (y3, ..., yn).
double transformed_residual(const BackgroundShock& bg, const WedgePerturbation& pert, double u,
                            const Eigen::VectorXd& du, const Eigen::MatrixXd& d2u,
                            const Eigen::VectorXd& y_prime);

// x = P^{-1} y = (u(y), y2 + phi_w(u, y'), y')
Eigen::VectorXd inverse_hodograph(const Eigen::VectorXd& y, double u, const WedgePerturbation& pert);
// y = P x for a potential phi evaluated at x
Eigen::VectorXd forward_hodograph(const Eigen::VectorXd& x, double phi,
                                  const WedgePerturbation& pert);

// u on the uniform quarter-plane grid y1 = i h1, y2 = j h2 (n = 2).
struct HodographField {
  BackgroundShock background;
  double h1 = 0.0;
  double h2 = 0.0;
  Eigen::MatrixXd u;  // u(i, j)

  int n1() const { return static_cast<int>(u.rows()); }
  int n2() const { return static_cast<int>(u.cols()); }
  Eigen::Vector2d y(int i, int j) const { return {i * h1, j * h2}; }
  // second-order stencils: centered inside, one-sided on the boundary
  Eigen::Vector2d gradient(int i, int j) const;
  Eigen::Matrix2d hessian(int i, int j) const;
};

HodographField background_field(const BackgroundShock& bg, double h1, double h2, int n1, int n2);
Eigen::MatrixXd residual_interior(const HodographField& field, const WedgePerturbation& pert);
// |D(u - u0)| at the corner node, i.e. the edge defect of the planar problem
double edge_condition_check(const HodographField& field, const WedgePerturbation& pert);

}  // namespace wedgeshock
