// Eigenvalues of the angular oblique-derivative problem and weight windows.
//
// On omega in [-w*/2, w*/2] the homogeneous problem is
//   v'' + lambda^2 v = 0,  -v' + lambda a+ v = 0 at w*/2,  v' + lambda a- v = 0 at -w*/2.
#pragma once

#include <string>
#include <vector>

#include <Eigen/Dense>

#include "wedgeshock/background.hpp"
#include "wedgeshock/interval.hpp"

namespace wedgeshock {

struct ObliqueAngularProblem {
  double omega_star = 0.5 * M_PI;
  double alpha_plus = 0.0;
  double alpha_minus = 0.0;
  Eigen::VectorXd c_plus;   // edge-tangential coefficients, empty in 2-D
  Eigen::VectorXd c_minus;

  ObliqueAngularProblem() = default;
  ObliqueAngularProblem(double omega_star_, double alpha_plus_, double alpha_minus_);

  double Phi() const;
  // lambda_m = (m pi - Phi) / w*
  double lambda(int m) const;
};

// Planar shock problem on [0, omega_s]: wedge side alpha- = 0, shock side
// alpha+ = -tan(omega_s + Phi_s).
ObliqueAngularProblem planar_problem(const BackgroundShock& bg);
// Skew problem of the multidimensional background, using the tilded angles;
// c+ carries the edge-tangential coefficient of the shock condition.
ObliqueAngularProblem skew_problem(const BackgroundShock& bg);

// 2x2 boundary determinant in the basis {cos(l w), sin(l w)/l} (-> {1, w} at l = 0).
double char_determinant(const ObliqueAngularProblem& p, double lambda);
// char_determinant / lambda, analytic and free of the trivial factor
double reduced_determinant(const ObliqueAngularProblem& p, double lambda);

struct AngularMode {
  double a = 1.0;  // coefficient of cos(lambda w)
  double b = 0.0;  // coefficient of sin(lambda w)/lambda
  double lambda = 0.0;
  // w measured from the sector bisector
  double value(double w) const;
  double derivative(double w) const;
};
// kernel of the boundary matrix, normalized to max |v| = 1 on the sector
AngularMode eigenfunction(const ObliqueAngularProblem& p, double lambda, double tol = 1e-8);

struct EigenSet {
  std::vector<double> values;
  std::string source;  // "formula" or "determinant"
};

EigenSet eigenvalues_in(const ObliqueAngularProblem& p, const Interval& range,
                        const std::string& source = "formula");
// open interval between 0 and -Phi/w*
Interval admissible_sigma(const ObliqueAngularProblem& p);
// {0} U {1 + (m pi + Phi_s)/omega_s}
EigenSet shifted_2d_eigenset(const BackgroundShock& bg, const Interval& range);
double shifted_2d_lambda(const BackgroundShock& bg, int m);

}  // namespace wedgeshock
