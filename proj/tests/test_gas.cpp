#include <cmath>
#include <stdexcept>

#include "doctest.h"
#include "wedgeshock/gas.hpp"

using namespace wedgeshock;

TEST_CASE("density at rest and at the sonic speed") {
  for (double g : {1.2, 1.4, 5.0 / 3.0}) {
    GasModel gas(g);
    CHECK(density(gas, 0.0) == doctest::Approx(1.0).epsilon(1e-15));
    // rho* = (2/(g+1))^{1/(g-1)}
    double rho_star = std::pow(2.0 / (g + 1.0), 1.0 / (g - 1.0));
    CHECK(density(gas, gas.q_cr_sq()) == doctest::Approx(rho_star).epsilon(1e-14));
    CHECK(sound_speed_sq(gas, gas.q_cr_sq()) == doctest::Approx(gas.q_cr_sq()).epsilon(1e-14));
    CHECK(mach(gas, gas.q_cr()) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(density(gas, gas.q_max_sq()) == 0.0);
  }
}

TEST_CASE("frozen density values for gamma = 1.4") {
  GasModel gas(1.4);
  CHECK(density(gas, 1.0) == doctest::Approx(0.5724334022399462).epsilon(1e-14));
  CHECK(density(gas, 0.25) == doctest::Approx(0.8796481896190089).epsilon(1e-14));
  CHECK(gas.q_max() == doctest::Approx(std::sqrt(5.0)).epsilon(1e-15));
  CHECK(gas.q_cr() == doctest::Approx(std::sqrt(2.0 / 2.4)).epsilon(1e-15));
}

TEST_CASE("density derivative matches finite differences") {
  GasModel gas(1.4);
  for (double q2 : {0.1, 0.5, 1.0, 2.0, 4.0}) {
    double h = 1e-6;
    double fd = (density(gas, q2 + h) - density(gas, q2 - h)) / (2 * h);
    CHECK(density_derivative(gas, q2) == doctest::Approx(fd).epsilon(1e-7));
  }
}

TEST_CASE("mass flux rho q peaks at the sonic speed") {
  GasModel gas(1.4);
  auto flux = [&](double q) { return density(gas, q * q) * q; };
  double qc = gas.q_cr();
  for (double dq : {1e-3, 1e-2, 0.1}) {
    CHECK(flux(qc) > flux(qc - dq));
    CHECK(flux(qc) > flux(qc + dq));
  }
}

TEST_CASE("coefficient matrix eigenvalues") {
  GasModel gas(1.4);
  Eigen::VectorXd v(2);
  v << 0.7, 0.4;
  Eigen::MatrixXd a = coefficient_matrix(gas, v);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(a);
  double c2 = sound_speed_sq(gas, v.squaredNorm());
  CHECK(es.eigenvalues()(0) == doctest::Approx(c2 - v.squaredNorm()).epsilon(1e-13));
  CHECK(es.eigenvalues()(1) == doctest::Approx(c2).epsilon(1e-13));
  // elliptic exactly when subsonic
  CHECK(es.eigenvalues()(0) > 0.0);
  Eigen::VectorXd fast(2);
  fast << 1.2, 0.0;
  CHECK(coefficient_matrix(gas, fast)(0, 0) < 0.0);
}

TEST_CASE("domain checks") {
  CHECK_THROWS_AS(GasModel(1.0), std::invalid_argument);
  CHECK_THROWS_AS(GasModel(0.5), std::invalid_argument);
  GasModel gas(1.4);
  CHECK_THROWS_AS(density(gas, -0.1), std::domain_error);
  CHECK_THROWS_AS(density(gas, 5.01), std::domain_error);
}
