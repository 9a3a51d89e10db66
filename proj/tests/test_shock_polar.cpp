#include <cmath>
#include <random>

#include "doctest.h"
#include "wedgeshock/shock_polar.hpp"

using namespace wedgeshock;

namespace {

struct PolarOracle {
  double gamma, q0, v1_normal, theta_crit;
};

// tools/oracles/polar_oracle.py (30-digit arithmetic)
const PolarOracle kOracle[] = {
    {1.2, 1.1, 0.81132875130599236, 0.066085732064606715},
    {1.2, 1.3, 0.63136518684404522, 0.2290236824244473},
    {1.2, 1.6, 0.39449791403805822, 0.5427777638766309},
    {1.4, 1.1, 0.72835704009143929, 0.10696824903748163},
    {1.4, 1.3, 0.53809055553210868, 0.31060023659390096},
    {1.4, 1.6, 0.27664087309942431, 0.71097290068494144},
    {5.0 / 3.0, 1.1, 0.62496726642907586, 0.17542425766859353},
    {5.0 / 3.0, 1.3, 0.40879605709966802, 0.45407023219721023},
    {5.0 / 3.0, 1.6, 0.090237636681607931, 1.0885039210292342},
};

// rho^- u.n = rho v.n with n along u - v
double mass_defect(const GasModel& gas, double q0, const PolarPoint& p) {
  Eigen::Vector2d u(q0, 0.0), v(p.v1, p.v2);
  Eigen::Vector2d n = (u - v).normalized();
  return density(gas, q0 * q0) * u.dot(n) - density(gas, v.squaredNorm()) * v.dot(n);
}

}  // namespace

TEST_CASE("normal shock and detachment angle agree with the high-precision oracle") {
  for (const auto& o : kOracle) {
    ShockPolar p(GasModel(o.gamma), o.q0);
    CHECK(p.normal_shock_v1() == doctest::Approx(o.v1_normal).epsilon(1e-13));
    CHECK(p.critical_angle() == doctest::Approx(o.theta_crit).epsilon(1e-10));
  }
}

TEST_CASE("frozen wedge solutions at q0 = 1.3, 17 degrees") {
  ShockPolar p(GasModel(1.4), 1.3);
  WedgeSolutions w = p.wedge_solutions(17.0 * M_PI / 180.0);
  REQUIRE_FALSE(w.detached);
  CHECK(w.weak.v1 == doctest::Approx(0.81734114356812204).epsilon(1e-12));
  CHECK(w.weak.v2 == doctest::Approx(0.24988626480728274).epsilon(1e-12));
  CHECK(w.strong.v1 == doctest::Approx(0.655729209498215).epsilon(1e-12));
  CHECK(w.strong.v2 == doctest::Approx(0.20047653807223767).epsilon(1e-12));
  CHECK(p.classify(w.weak) == Regime::weak_transonic);
  CHECK(p.classify(w.strong) == Regime::strong_transonic);
}

TEST_CASE("every sampled point satisfies the jump relations and entropy") {
  for (const auto& o : kOracle) {
    GasModel gas(o.gamma);
    ShockPolar p(gas, o.q0);
    auto pts = p.sample(101);
    CHECK(pts.front().v2 < 1e-7);  // square root of a rounding-level residual
    CHECK(pts.back().v1 == doctest::Approx(o.q0));
    for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
      CHECK(std::abs(p.residual(pts[i].v1, pts[i].v2)) <= 1e-10);
      CHECK(std::abs(mass_defect(gas, o.q0, pts[i])) <= 1e-10);
      CHECK(pts[i].rho > p.rho_minus());
      CHECK(pts[i].q == doctest::Approx(std::hypot(pts[i].v1, pts[i].v2)).epsilon(1e-15));
    }
  }
}

TEST_CASE("deflection is maximal at the critical point") {
  ShockPolar p(GasModel(1.4), 1.3);
  double vc = p.critical_v1();
  for (double d : {1e-3, 1e-2, 5e-2}) {
    CHECK(p.deflection(vc) > p.deflection(vc - d));
    CHECK(p.deflection(vc) > p.deflection(vc + d));
  }
  CHECK(p.classify(p.point(vc)) == Regime::critical);
}

TEST_CASE("wedge solutions reproduce the wedge angle and bracket the critical point") {
  std::mt19937 rng(11);
  std::uniform_real_distribution<double> U(0.02, 0.98);
  for (const auto& o : kOracle) {
    ShockPolar p(GasModel(o.gamma), o.q0);
    for (int k = 0; k < 10; ++k) {
      double th = U(rng) * p.critical_angle();
      WedgeSolutions w = p.wedge_solutions(th);
      REQUIRE_FALSE(w.detached);
      CHECK(std::atan2(w.weak.v2, w.weak.v1) == doctest::Approx(th).epsilon(1e-11));
      CHECK(std::atan2(w.strong.v2, w.strong.v1) == doctest::Approx(th).epsilon(1e-11));
      CHECK(w.strong.q < w.weak.q);
      CHECK(w.strong.v1 < p.critical_v1());
      CHECK(w.weak.v1 > p.critical_v1());
      CHECK(p.classify(w.strong) == Regime::strong_transonic);
    }
    CHECK(p.wedge_solutions(p.critical_angle() * 1.001).detached);
  }
}

TEST_CASE("polar normal is the gradient of the shock function") {
  GasModel gas(1.4);
  ShockPolar p(gas, 1.3);
  WedgeSolutions w = p.wedge_solutions(0.25);
  Eigen::VectorXd u = p.upstream();
  for (const PolarPoint& pt : {w.weak, w.strong}) {
    Eigen::VectorXd v = p.downstream(pt);
    Eigen::VectorXd dphi = u - v;
    CHECK(std::abs(shock_function(gas, dphi, u)) < 1e-12);
    Eigen::VectorXd g = shock_function_gradient(gas, dphi, u);
    for (int i = 0; i < 2; ++i) {
      Eigen::VectorXd e = Eigen::VectorXd::Zero(2);
      e(i) = 1e-6;
      double fd = (shock_function(gas, dphi + e, u) - shock_function(gas, dphi - e, u)) / 2e-6;
      CHECK(g(i) == doctest::Approx(fd).epsilon(1e-6));
    }
    // the polar normal is orthogonal to the polar tangent
    Eigen::VectorXd nu = polar_normal(gas, v, u);
    double h = 1e-6;
    PolarPoint a = p.point(pt.v1 - h), b = p.point(pt.v1 + h);
    Eigen::Vector2d tangent(b.v1 - a.v1, b.v2 - a.v2);
    CHECK(std::abs(nu.head(2).normalized().dot(tangent.normalized())) < 1e-6);
  }
}

TEST_CASE("sign dichotomy of nu1/nu2 in the wedge frame") {
  for (const auto& o : kOracle) {
    ShockPolar p(GasModel(o.gamma), o.q0);
    for (int k = 1; k <= 10; ++k) {
      WedgeSolutions w = p.wedge_solutions(p.critical_angle() * k / 11.0);
      Eigen::VectorXd nb = p.normal_wedge_frame(w.weak), na = p.normal_wedge_frame(w.strong);
      CHECK(nb(0) / nb(1) > 0.0);
      CHECK(na(0) / na(1) < 0.0);
    }
  }
}

TEST_CASE("three-dimensional balloon reduces to the normal polar") {
  GasModel gas(1.4);
  ShockPolar p3(gas, 1.3, 0.2, 3);
  CHECK(p3.dim() == 3);
  PolarPoint pt = p3.point(0.9);
  REQUIRE(pt.v_t.size() == 1);
  CHECK(pt.v_t(0) == doctest::Approx(0.2));
  CHECK(std::abs(p3.residual(pt.v1, pt.v2)) < 1e-10);
  Eigen::VectorXd u = p3.upstream(), v = p3.downstream(pt);
  CHECK(std::abs(shock_function(gas, u - v, u)) < 1e-10);
}

TEST_CASE("precondition errors") {
  GasModel gas(1.4);
  CHECK_THROWS_AS(ShockPolar(gas, 0.8), std::domain_error);
  CHECK_THROWS_AS(ShockPolar(gas, 3.0), std::domain_error);
  CHECK_THROWS_AS(ShockPolar(gas, 1.3, 0.2, 2), std::invalid_argument);
  ShockPolar p(gas, 1.3);
  CHECK_THROWS_AS(p.wedge_solutions(-0.1), std::invalid_argument);
  CHECK_THROWS_AS(p.transverse_speed(0.1), std::domain_error);
  CHECK_THROWS_AS(p.sample(1), std::invalid_argument);
}
