#include <cmath>
#include <random>

#include "doctest.h"
#include "wedgeshock/elliptic.hpp"

using namespace wedgeshock;

namespace {

ObliqueAngularProblem sample_problem() { return ObliqueAngularProblem(1.0, 0.7, -0.3); }

StripGrid grid_for(const ObliqueAngularProblem& p, int nt = 65, int nw = 17, double t0 = -4, double t1 = 2) {
  return StripGrid{t0, t1, nt, nw, 0.0, p.omega_star};
}

}  // namespace

TEST_CASE("strip grid geometry") {
  StripGrid g{-2.0, 2.0, 9, 9, 0.0, 1.0};
  CHECK(g.h_t() == doctest::Approx(0.5));
  CHECK(g.r(0) == doctest::Approx(std::exp(-2.0)));
  StripGrid f = g.refined();
  CHECK(f.n_t == 17);
  CHECK(f.h_omega() == doctest::Approx(0.5 * g.h_omega()));
  CHECK_THROWS_AS(StripGrid({0, 1, 4, 9, 0, 1}).validate(), std::invalid_argument);
  CHECK_THROWS_AS(StripGrid({1, 1, 9, 9, 0, 1}).validate(), std::invalid_argument);
}

TEST_CASE("second-order convergence on smooth manufactured data") {
  ObliqueAngularProblem p = sample_problem();
  auto rows = convergence_study(p, grid_for(p, 33, 9), 3);
  REQUIRE(rows.size() == 3);
  CHECK(std::isnan(rows[0].order_estimate));
  for (int k = 1; k < 3; ++k) {
    CHECK(rows[k].order_estimate > 1.8);
    CHECK(rows[k].order_estimate < 2.2);
  }
}

TEST_CASE("discrete maximum principle") {
  // harmonic data from the ends only: values stay between the end values
  for (double ap : {0.0, 0.7, -0.5}) {
    for (double am : {0.0, -0.3, 0.4}) {
      ObliqueAngularProblem p(1.2, ap, am);
      StripGrid g = grid_for(p, 41, 13, -2, 2);
      GridField f(g);
      Eigen::VectorXd zero = Eigen::VectorXd::Zero(g.n_t);
      Eigen::VectorXd one = Eigen::VectorXd::Ones(g.n_omega);
      GridField u = solve_sector(p, f, zero, zero, g, FarFieldPolicy::dirichlet(one, Eigen::VectorXd::Zero(g.n_omega)));
      CHECK(u.values.maxCoeff() <= 1.0 + 1e-3);
      CHECK(u.values.minCoeff() >= -1e-3);
      // monotone in t away from the ends
      CHECK(u(g.n_t / 4, g.n_omega / 2) > u(3 * g.n_t / 4, g.n_omega / 2));
    }
  }
}

TEST_CASE("eigenfunction traces recover the corner exponent") {
  // principal exponent; lower modes excited by far-end truncation decay toward the corner
  ObliqueAngularProblem p(1.0, -0.7, -0.3);
  double lam = p.lambda(0);
  REQUIRE(lam > 0.0);
  StripGrid g = grid_for(p, 97, 17, -4, 1);
  Manufactured m = manufactured_problem(p, {ManufacturedChoice::Kind::eigenfunction, lam}, g);
  GridField u = solve_sector(p, m.f, m.g_plus, m.g_minus, g,
                             FarFieldPolicy::dirichlet(m.corner_trace(), m.far_trace()));
  CHECK(max_error(u, m.exact) < 1e-2 * m.exact.values.cwiseAbs().maxCoeff());
  ExponentFit fit = corner_exponent_fit(u, -3.5, -1.5);
  CHECK(fit.lambda_hat == doctest::Approx(lam).epsilon(0.02));
  CHECK(fit.r_squared > 0.999);
}

TEST_CASE("contour functional is conserved for homogeneous solutions") {
  ObliqueAngularProblem p = sample_problem();
  StripGrid g = grid_for(p, 97, 33, -3, 1);
  double lam = p.lambda(1);
  Manufactured m = manufactured_problem(p, {ManufacturedChoice::Kind::eigenfunction, p.lambda(2)}, g);
  // r^{lambda_2} v_2 pairs to zero against the lambda_1 mode at every radius
  GridField u = m.exact;
  double norm = std::abs(contour_functional(p, u, p.lambda(2), 10));
  CHECK(norm > 1e-6);
  for (int i : {5, 40, 80}) {
    CHECK(std::abs(contour_functional(p, u, lam, i)) < 1e-2 * norm);
    CHECK(contour_functional(p, u, p.lambda(2), i) == doctest::Approx(contour_functional(p, u, p.lambda(2), 10)).epsilon(1e-2));
  }
}

TEST_CASE("resonant exponents are rejected") {
  ObliqueAngularProblem p = sample_problem();
  StripGrid g = grid_for(p);
  GridField f(g);
  Eigen::VectorXd z = Eigen::VectorXd::Zero(g.n_t);
  CHECK_THROWS_AS(solve_sector(p, f, z, z, g, FarFieldPolicy::asymptotic(p.lambda(0), -0.5)),
                  ResonanceError);
  CHECK_THROWS_AS(asymptotic_ends(p, 0.5, p.lambda(-1)), ResonanceError);
  CHECK_NOTHROW(asymptotic_ends(p, 0.5 * p.lambda(0), -0.5));
  // the operator degenerates when both ends carry an eigen-exponent
  double at = condition_diagnostic(p, g, p.lambda(1));
  double off = condition_diagnostic(p, g, 0.5 * (p.lambda(0) + p.lambda(1)));
  CHECK(at > 10.0 * off);
}

TEST_CASE("asymptotic ends pick the neighbouring eigenvalues") {
  ObliqueAngularProblem p(1.0, -0.7, -0.3);
  REQUIRE(p.lambda(0) > 0.0);
  auto [corner, far] = asymptotic_ends(p, 0.5 * p.lambda(0), -0.5);
  // corner: first eigenvalue above sigma; far: last one below
  CHECK(-corner.a / corner.b == doctest::Approx(p.lambda(0)));
  CHECK(-far.a / far.b == doctest::Approx(p.lambda(-1)));
  auto [c2, f2] = asymptotic_ends(p, 0.5 * p.lambda(0), 0.5 * p.lambda(0));
  CHECK(-c2.a / c2.b == doctest::Approx(p.lambda(0)));
  CHECK(-f2.a / f2.b == 0.0);
}

TEST_CASE("complex transverse-mode system converges at second order") {
  SectorSystem<std::complex<double>> sys;
  sys.grid = StripGrid{-3, 2, 33, 9, 0.0, 1.1};
  sys.alpha_plus = 0.4;
  sys.alpha_minus = 0.0;
  sys.kappa_plus = {0.0, 0.8};
  sys.mu = 1.0;
  std::vector<double> err;
  for (int l = 0; l < 3; ++l) {
    ComplexManufactured m = manufactured_complex(sys);
    SectorSolver<std::complex<double>> s(sys);
    ComplexGridField u(sys.grid);
    u.values = s.solve(m.f.values, m.g_plus, m.g_minus, m.corner_trace(), m.far_trace());
    CHECK(s.last_residual() < 1e-10);
    err.push_back(max_error(u, m.exact));
    sys.grid = sys.grid.refined();
  }
  for (int k = 1; k < 3; ++k) CHECK(std::log2(err[k - 1] / err[k]) == doctest::Approx(2.0).epsilon(0.15));
}

TEST_CASE("strip jet reproduces Cartesian derivatives of a quadratic") {
  StripGrid g{-1, 1, 41, 41, 0.2, 1.3};
  GridField u(g);
  for (int i = 0; i < g.n_t; ++i)
    for (int j = 0; j < g.n_omega; ++j) {
      Eigen::Vector2d x = u.point(i, j);
      u(i, j) = 1.0 + 2.0 * x(0) - x(1) + 0.5 * x(0) * x(0) + 0.3 * x(0) * x(1) - 0.2 * x(1) * x(1);
    }
  Eigen::Matrix2d H;
  H << 1.0, 0.3, 0.3, -0.4;
  double e_grad[2], e_hess[2];
  for (int lev = 0; lev < 2; ++lev) {
    e_grad[lev] = e_hess[lev] = 0.0;
    for (auto [fi, fj] : {std::pair{0.5, 0.5}, std::pair{0.0, 0.0}, std::pair{1.0, 0.3}}) {
      int i = static_cast<int>(std::lround(fi * (g.n_t - 1))), j = static_cast<int>(std::lround(fj * (g.n_omega - 1)));
      StripJet jet = strip_jet(u, i, j);
      Eigen::Vector2d x = u.point(i, j);
      Eigen::Vector2d grad(2.0 + x(0) + 0.3 * x(1), -1.0 + 0.3 * x(0) - 0.4 * x(1));
      e_grad[lev] = std::max(e_grad[lev], (jet.gradient() - grad).norm());
      e_hess[lev] = std::max(e_hess[lev], (jet.hessian() - H).norm());
    }
    if (lev == 0) {
      CHECK(e_grad[0] < 1e-2);
      CHECK(e_hess[0] < 5e-2);
      g = g.refined();
      GridField v(g);
      for (int i = 0; i < g.n_t; ++i)
        for (int j = 0; j < g.n_omega; ++j) {
          Eigen::Vector2d x = v.point(i, j);
          v(i, j) = 1.0 + 2.0 * x(0) - x(1) + 0.5 * x(0) * x(0) + 0.3 * x(0) * x(1) - 0.2 * x(1) * x(1);
        }
      u = v;
    }
  }
  // second order including the one-sided edge stencils
  CHECK(e_grad[0] / e_grad[1] > 3.5);
  CHECK(e_hess[0] / e_hess[1] > 3.5);
}

TEST_CASE("weighted norms") {
  StripGrid g{-3, 2, 51, 11, 0.0, 1.0};
  GridField u(g);
  for (int i = 0; i < g.n_t; ++i)
    for (int j = 0; j < g.n_omega; ++j) u(i, j) = std::pow(g.r(i), 1.5) * std::exp(-g.r(i)) * std::cos(g.omega(j));
  WeightSpec spec = WeightSpec::from_sigma(2, 0.5, 0.5, -0.5);
  CHECK(spec.sigma0() == doctest::Approx(0.5));
  CHECK(spec.sigma_inf() == doctest::Approx(-0.5));
  CHECK(spec.beta0 == doctest::Approx(1.0));
  double n1 = weighted_holder_norm(u, spec);
  CHECK(n1 > 0.0);
  GridField v = u;
  v.values *= -3.0;
  CHECK(weighted_holder_norm(v, spec) == doctest::Approx(3.0 * n1).epsilon(1e-12));
  GridField w = u;
  w.values = u.values.cwiseAbs2();
  GridField s = u;
  s.values += w.values;
  CHECK(weighted_holder_norm(s, spec) <= n1 + weighted_holder_norm(w, spec) + 1e-12);
  CHECK(weighted_holder_norm(u, spec) ==
        doctest::Approx(weighted_holder_norm(u, 2, 0.5, spec.beta0) + weighted_holder_norm(u, 2, 0.5, spec.beta_inf)));
  // scaling r^s with s = ell + alpha - beta has bounded sup terms in the beta weight
  auto power = [](double a) {
    return [a](double x, int k) {
      return k == 0 ? std::pow(x, a) : (k == 1 ? a * std::pow(x, a - 1) : a * (a - 1) * std::pow(x, a - 2));
    };
  };
  WeightSpec sp = WeightSpec::from_sigma(2, 0.5, 1.0, 1.0);
  double small = weighted_holder_norm_1d(power(2.0), sp, 1e-3, 1.0);
  double smaller = weighted_holder_norm_1d(power(2.0), sp, 1e-5, 1.0);
  CHECK(smaller == doctest::Approx(small).epsilon(0.05));
  CHECK_THROWS_AS(WeightSpec::from_sigma(3, 0.5, 0, 0).validate(), std::invalid_argument);
  CHECK_THROWS_AS(WeightSpec::from_sigma(2, 1.5, 0, 0).validate(), std::invalid_argument);
}

TEST_CASE("solver input checks") {
  ObliqueAngularProblem p = sample_problem();
  StripGrid bad{-1, 1, 17, 9, 0.0, 2.0};
  GridField f(bad);
  Eigen::VectorXd z = Eigen::VectorXd::Zero(bad.n_t);
  CHECK_THROWS_AS(solve_sector(p, f, z, z, bad, FarFieldPolicy::dirichlet()), std::invalid_argument);
  StripGrid g = grid_for(p);
  GridField nan_f(g);
  nan_f(3, 3) = NAN;
  Eigen::VectorXd zg = Eigen::VectorXd::Zero(g.n_t);
  CHECK_THROWS_AS(solve_sector(p, nan_f, zg, zg, g, FarFieldPolicy::dirichlet()), std::invalid_argument);
  GridField zero(g);
  CHECK_THROWS_AS(corner_exponent_fit(zero, -3, -1), std::domain_error);
}
