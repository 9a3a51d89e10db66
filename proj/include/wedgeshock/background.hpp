// Unperturbed transonic wedge shock in the wedge-aligned frame.
//
// Frame: x1 along the wedge surface, x2 normal to it (flow side x2 > 0),
// x3 along the edge. Upstream U0^- = (q0^- cos a, -q0^- sin a, U03^-, 0...),
// downstream U0^+ = q0^+ (cos w1, 0, cos w3, 0...).
#pragma once

#include <optional>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

#include "wedgeshock/gas.hpp"
#include "wedgeshock/interval.hpp"
#include "wedgeshock/shock_polar.hpp"

namespace wedgeshock {

enum class Branch { weak, strong };
std::string to_string(Branch b);
Branch branch_from_string(const std::string& s);

struct DetachedWedge : std::domain_error {
  using std::domain_error::domain_error;
};
struct DegenerateEllipticity : std::domain_error {
  using std::domain_error::domain_error;
};

struct StabilityExponents {
  // perpendicular-case formulas
  double omega_s = 0.0;
  double phi_s = 0.0;
  double sigma_s = 0.0;
  // skew-case (tilded) formulas; equal to the above when omega1 = 0
  double omega_s_tilde = 0.0;
  double phi_s_tilde = 0.0;
  double sigma_s_tilde = 0.0;
  // Psi = arccot(nu1/nu2) in (0, pi)
  double psi = 0.0;
};

struct CanonicalTransforms {
  Eigen::MatrixXd P;
  Eigen::MatrixXd P0;
};

struct BackgroundShock {
  int n = 2;
  double gamma = 1.4;
  double alpha_w = 0.0;
  double q0_minus = 0.0;
  double u03_minus = 0.0;
  double q0_plus = 0.0;
  double omega1 = 0.0;
  double omega3 = 0.5 * M_PI;
  Branch branch = Branch::weak;
  Regime regime = Regime::weak_transonic;
  bool transonic = false;
  double mach_plus = 0.0;

  Eigen::VectorXd U_minus;  // Dphi0^-
  Eigen::VectorXd U_plus;   // Dphi0^+
  Eigen::VectorXd dphi0;    // Dphi0 = Dphi0^- - Dphi0^+
  Eigen::VectorXd nu;       // grad of H_s at (Dphi0, Dphi0^-)
  Eigen::VectorXd du0;      // D_y u0
  Eigen::MatrixXd A0;       // A(Dphi0^+)
  Eigen::MatrixXd J0;       // J(Du0; 0)

  std::optional<StabilityExponents> exponents;
  std::optional<CanonicalTransforms> transforms;

  GasModel gas() const { return GasModel(gamma); }
  bool skew() const { return u03_minus != 0.0; }
  // q0^- cos a - q0^+ cos w1 = 1 / d_{y1} u0
  double front_denominator() const;
  // the exponent that gates stability: tilded value (equal to sigma_s when omega1 = 0)
  double governing_sigma() const;
  double governing_omega() const;
  double governing_phi() const;

  double phi0_minus(const Eigen::VectorXd& x) const { return U_minus.dot(x); }
  double phi0_plus(const Eigen::VectorXd& x) const { return U_plus.dot(x); }
  double u0(const Eigen::VectorXd& y) const { return du0.dot(y); }
};

// n = 0 selects 2 when u03_minus = 0 and 3 otherwise.
BackgroundShock solve_background(double gamma, double q0_minus, double alpha_w,
                                 double u03_minus, Branch branch, int n = 0);

StabilityExponents stability_exponents(const BackgroundShock& bg);
CanonicalTransforms canonical_transforms(const BackgroundShock& bg);

struct WeightWindow {
  Interval sigma_inf;
  Interval sigma0;
  bool empty() const { return sigma_inf.empty() || sigma0.empty(); }
  bool contains(double s_inf, double s0) const {
    return sigma_inf.contains(s_inf) && sigma0.contains(s0);
  }
};

// dim >= 3: multidimensional window; dim = 2: windows of the planar problem.
WeightWindow admissible_weights(const BackgroundShock& bg, int dim);

// Largest |H_s| / |phi0| defect of the assembled potentials on random front samples.
double background_residual(const BackgroundShock& bg, int samples = 64, unsigned seed = 7);

}  // namespace wedgeshock
