// Acceptance checks AC1..AC9; one PASS/FAIL line each.
//   acceptance [AC1 ... AC9]   (no argument runs all)
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <random>
#include <string>
#include <vector>

#include "wedgeshock/background.hpp"
#include "wedgeshock/elliptic.hpp"
#include "wedgeshock/iterate.hpp"
#include "wedgeshock/shock_polar.hpp"
#include "wedgeshock/spectrum.hpp"

using namespace wedgeshock;

namespace {

const double kDeg = M_PI / 180.0;
const double kGammas[] = {1.2, 1.4, 5.0 / 3.0};
const double kQ0[] = {1.1, 1.3, 1.6};

struct Verdict {
  bool pass = true;
  std::string detail;
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string fmt(const char* f, double a) {
  char buf[128];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

BackgroundShock weak17() { return solve_background(1.4, 1.3, 17 * kDeg, 0.0, Branch::weak); }

// ---------------------------------------------------------------------------

Verdict ac1() {
  double worst_rh = 0.0, worst_flux = 0.0, min_jump = INFINITY;
  for (double g : kGammas)
    for (double q0 : kQ0) {
      GasModel gas(g);
      ShockPolar p(gas, q0);
      std::vector<PolarPoint> pts = p.sample(401);
      pts.pop_back();  // v1 = q0: no shock
      for (int k = 1; k <= 20; ++k) {
        WedgeSolutions w = p.wedge_solutions(p.critical_angle() * k / 21.0);
        pts.push_back(w.weak);
        pts.push_back(w.strong);
      }
      for (const PolarPoint& pt : pts) {
        worst_rh = std::max(worst_rh, std::abs(p.residual(pt.v1, pt.v2)));
        min_jump = std::min(min_jump, pt.rho - p.rho_minus());
      }
      double v1 = p.normal_shock_v1();
      worst_flux = std::max(worst_flux, std::abs(density(gas, v1 * v1) * v1 - p.rho_minus() * q0));
    }
  Verdict v;
  v.pass = worst_rh <= 1e-10 && min_jump > 0.0 && worst_flux <= 1e-10;
  v.detail = "max RH residual " + fmt("%.2e", worst_rh) + ", min rho - rho^- " + fmt("%.3e", min_jump) +
             ", normal-shock flux defect " + fmt("%.2e", worst_flux);
  return v;
}

Verdict ac2() {
  bool signs = true;
  double near = 0.0;
  for (double g : kGammas)
    for (double q0 : kQ0) {
      double thc = critical_angle(GasModel(g), q0);
      for (int k = 1; k <= 20; ++k) {
        double th = thc * k / 21.0;
        BackgroundShock A = solve_background(g, q0, th, 0.0, Branch::strong);
        BackgroundShock B = solve_background(g, q0, th, 0.0, Branch::weak);
        signs = signs && B.nu(0) / B.nu(1) > 0.0 && A.nu(0) / A.nu(1) < 0.0;
      }
      for (double d : {1e-4, 1e-5}) {
        for (Branch b : {Branch::weak, Branch::strong}) {
          BackgroundShock s = solve_background(g, q0, thc - d, 0.0, b);
          near = std::max(near, std::abs(s.nu(0) / s.nu(1)));
        }
      }
    }
  Verdict v;
  v.pass = signs && near < 1e-3;
  v.detail = std::string("sign dichotomy ") + (signs ? "holds" : "violated") + " on 180 angles; max |nu1/nu2| within 1e-4 of critical " +
             fmt("%.3e", near) + " (need < 1e-3)";
  return v;
}

Verdict ac3() {
  std::mt19937 rng(20240517);
  std::uniform_real_distribution<double> W(0.3, 2 * M_PI - 0.3), A(-3.0, 3.0);
  double worst = 0.0;
  int inside = 0;
  for (int k = 0; k < 50; ++k) {
    ObliqueAngularProblem p(W(rng), A(rng), A(rng));
    double gap = M_PI / p.omega_star;
    for (int m = -3; m <= 3; ++m) {
      double lf = p.lambda(m);
      EigenSet z = eigenvalues_in(p, Interval::closed(lf - 0.4 * gap, lf + 0.4 * gap), "determinant");
      double best = INFINITY;
      for (double x : z.values) best = std::min(best, std::abs(x - lf));
      worst = std::max(worst, best);
    }
    Interval w = admissible_sigma(p);
    if (w.empty()) continue;
    EigenSet z = eigenvalues_in(p, Interval::closed(w.lo, w.hi), "determinant");
    Interval inner = Interval::open(w.lo + 1e-8, w.hi - 1e-8);
    for (double x : z.values)
      if (inner.contains(x)) ++inside;
  }
  Verdict v;
  v.pass = worst <= 1e-8 && inside == 0;
  v.detail = "max |determinant zero - closed form| " + fmt("%.2e", worst) + ", zeros inside windows " +
             std::to_string(inside);
  return v;
}

Verdict ac4() {
  auto t0 = std::chrono::steady_clock::now();
  std::vector<ObliqueAngularProblem> problems = {planar_problem(weak17()),
                                                 planar_problem(solve_background(1.4, 1.3, 10 * kDeg, 0.0, Branch::strong)),
                                                 ObliqueAngularProblem(1.0, 0.7, -0.3)};
  double lo = INFINITY, hi = -INFINITY;
  for (const auto& p : problems) {
    StripGrid g{-4.0, 2.0, 65, 17, 0.0, p.omega_star};
    for (const ConvergenceRow& r : convergence_study(p, g, 3)) {
      if (std::isnan(r.order_estimate)) continue;
      lo = std::min(lo, r.order_estimate);
      hi = std::max(hi, r.order_estimate);
    }
  }
  double t = seconds_since(t0);
  Verdict v;
  v.pass = lo >= 1.7 && hi <= 2.3 && t < 60.0;
  v.detail = "orders in [" + fmt("%.3f", lo) + ", " + fmt("%.3f", hi) + "] on n_t 65/129/257, " + fmt("%.2f s", t);
  return v;
}

Verdict ac5() {
  BackgroundShock bg = weak17();
  ObliqueAngularProblem p = planar_problem(bg);
  double l0 = 1.0 + bg.exponents->sigma_s;
  StripGrid g{-5.0, 1.0, 121, 41, 0.0, p.omega_star};
  Manufactured m = manufactured_problem(p, {ManufacturedChoice::Kind::eigenfunction, l0}, g);
  GridField u = solve_sector(p, m.f, m.g_plus, m.g_minus, g, FarFieldPolicy::dirichlet(m.corner_trace(), m.far_trace()));
  ExponentFit fit = corner_exponent_fit(u, -4.0, 0.0);
  double rel = std::abs(fit.lambda_hat - l0) / l0;
  bool ok = rel <= 0.02;
  std::string detail = "weak: lambda_hat " + fmt("%.6f", fit.lambda_hat) + " vs lambda0 " + fmt("%.6f", l0) +
                       " (" + fmt("%.3f%%", 100 * rel) + ")";
  double min_fit = INFINITY, max_grad = 0.0;
  for (double th : {5.0, 10.0, 15.0}) {
    BackgroundShock s = solve_background(1.4, 1.3, th * kDeg, 0.0, Branch::strong);
    IterationReport r = strong_branch_2d_run(make_iteration_config(s, 0.01), 2);
    ok = ok && r.converged && r.corner_fit_valid;
    min_fit = std::min(min_fit, r.corner_fit.lambda_hat);
    max_grad = std::max(max_grad, r.corner_defect);
  }
  ok = ok && min_fit >= 1.0 && std::isfinite(max_grad);
  detail += "; strong 5/10/15 deg: min fitted exponent " + fmt("%.3f", min_fit) + ", corner |Du_dot| <= " +
            fmt("%.3e", max_grad);
  return {ok, detail};
}

struct Delta0 {
  double d0;
  IterationConfig config;
};
Delta0 delta0() {
  IterationConfig c = make_iteration_config(weak17(), 0.0);
  return {find_delta0(c), c};
}
IterationReport run_at(const IterationConfig& base, double d) {
  IterationConfig c = base;
  c.pert = perturbation_for_delta(d, c.spec, 2);
  return run_iteration(c);
}

Verdict ac6() {
  Delta0 s = delta0();
  IterationReport a = run_at(s.config, s.d0), b = run_at(s.config, s.d0 / 4);
  double ra = a.max_ratio(), rb = b.max_ratio(), q = rb / ra;
  Verdict v;
  v.pass = a.converged && b.converged && ra <= 0.6 && q >= 0.125 && q <= 0.5;
  v.detail = "delta0 " + fmt("%.5g", s.d0) + ": max ratio " + fmt("%.4f", ra) + " (<= 0.6), ratio(d0/4)/ratio(d0) " +
             fmt("%.4f", q) + " (in [0.125, 0.5])";
  return v;
}

Verdict ac7() {
  Delta0 s = delta0();
  double kmin = INFINITY, kmax = 0.0, cert = 0.0;
  bool ok = true;
  for (double d : {s.d0, s.d0 / 2, s.d0 / 4}) {
    IterationReport r = run_at(s.config, d);
    ok = ok && r.converged;
    kmin = std::min(kmin, r.K_hat);
    kmax = std::max(kmax, r.K_hat);
    cert = std::max(cert, r.residuals.max() / r.manufactured_error);
  }
  Verdict v;
  v.pass = ok && kmax / kmin < 2.0 && cert <= 5.0;
  v.detail = "K_hat in [" + fmt("%.3f", kmin) + ", " + fmt("%.3f", kmax) + "] (spread " + fmt("%.3f", kmax / kmin) +
             "), residual / manufactured error <= " + fmt("%.2e", cert);
  return v;
}

Verdict ac8() {
  int strong = 0, weak = 0, bad = 0, combos = 0;
  double skew_defect = 0.0;
  for (double g : kGammas)
    for (double q0 : kQ0)
      for (double w3 : {0.1, 0.2, 0.4}) {
        GasModel gas(g);
        double thc = 0.0;
        try {
          thc = ShockPolar(gas, q0, w3, 3).critical_angle();
          solve_background(g, q0, 0.5 * thc, w3, Branch::weak);
        } catch (const std::exception&) {
          continue;  // no attached 3-D shock for this upstream state
        }
        ++combos;
        for (int k = 1; k <= 20; ++k) {
          double th = thc * k / 21.0;
          BackgroundShock s = solve_background(g, q0, th, w3, Branch::strong);
          ++strong;
          if (!admissible_weights(s, 3).empty()) ++bad;
        }
        // weak transonic backgrounds sit between the sonic and critical angles
        BackgroundShock top = solve_background(g, q0, thc * (1 - 1e-9), w3, Branch::weak);
        double lo = 0.0, hi = thc * (1 - 1e-9);
        if (!top.transonic) continue;
        for (int it = 0; it < 60; ++it) {
          double mid = 0.5 * (lo + hi);
          (solve_background(g, q0, mid, w3, Branch::weak).transonic ? hi : lo) = mid;
        }
        for (int k = 1; k <= 20; ++k) {
          double th = hi + (thc - hi) * k / 21.0;
          BackgroundShock w = solve_background(g, q0, th, w3, Branch::weak);
          if (!w.transonic) continue;
          ++weak;
          WeightWindow win = admissible_weights(w, 3);
          bool shape = !win.empty() && win.sigma_inf.lo == -1.0 && win.sigma_inf.hi == 0.0 && win.sigma_inf.hi_closed &&
                       win.sigma0.lo == 0.0 && win.sigma0.hi == w.exponents->sigma_s_tilde && win.sigma0.hi > 0.0;
          if (!shape) ++bad;
          ObliqueAngularProblem sk = skew_problem(w);
          skew_defect = std::max(skew_defect, std::abs(-sk.Phi() / sk.omega_star - 1.0 - w.exponents->sigma_s_tilde));
        }
      }
  GasModel gas(1.4);
  BackgroundShock bg = solve_background(1.4, 1.3, 0.999 * ShockPolar(gas, 1.3, 0.2, 3).critical_angle(), 0.2, Branch::weak);
  StripGrid base{-4.0, 2.0, 65, 17, 0.0, 1.0};
  double lo = INFINITY, hi = -INFINITY;
  for (double eta : {0.5, 1.0, 2.0})
    for (const ConvergenceRow& r : md_mode_convergence(bg, eta, base, 3)) {
      if (std::isnan(r.order_estimate)) continue;
      lo = std::min(lo, r.order_estimate);
      hi = std::max(hi, r.order_estimate);
    }
  Verdict v;
  v.pass = bad == 0 && weak > 0 && skew_defect < 1e-10 && lo >= 1.7 && hi <= 2.3;
  v.detail = std::to_string(combos) + " upstream states, " + std::to_string(strong) + " strong / " + std::to_string(weak) + " weak M-D backgrounds, " +
             std::to_string(bad) + " window mismatches, skew exponent defect " + fmt("%.1e", skew_defect) + "; transverse-mode orders in [" + fmt("%.3f", lo) + ", " +
             fmt("%.3f", hi) + "] for eta 0.5/1/2";
  return v;
}

Verdict ac9() {
  IterationConfig base = make_iteration_config(weak17(), 0.04);
  std::vector<double> defects;
  bool ok = true;
  double h = (base.t_max - base.t_min) / (base.n_t - 1);
  for (int lev = 0; lev < 3; ++lev) {
    IterationConfig c = base;
    // each refinement halves both spacings and moves the innermost ring toward the corner
    c.t_min = base.t_min - lev;
    double hl = h / std::pow(2.0, lev);
    c.n_t = static_cast<int>(std::lround((c.t_max - c.t_min) / hl)) + 1;
    c.n_omega = (base.n_omega - 1) * (1 << lev) + 1;
    IterationReport r = run_iteration(c);
    ok = ok && r.converged;
    defects.push_back(r.corner_defect);
  }
  ok = ok && defects[1] < defects[0] && defects[2] < defects[1];
  Verdict v;
  v.pass = ok;
  v.detail = "corner max|Du_dot| " + fmt("%.4e", defects[0]) + " -> " + fmt("%.4e", defects[1]) + " -> " +
             fmt("%.4e", defects[2]);
  return v;
}

}  // namespace

int main(int argc, char** argv) {
  std::vector<std::pair<std::string, std::function<Verdict()>>> all = {
      {"AC1", ac1}, {"AC2", ac2}, {"AC3", ac3}, {"AC4", ac4}, {"AC5", ac5},
      {"AC6", ac6}, {"AC7", ac7}, {"AC8", ac8}, {"AC9", ac9}};
  std::vector<std::string> pick(argv + 1, argv + argc);
  bool failed = false;
  for (const auto& [name, fn] : all) {
    if (!pick.empty() && std::find(pick.begin(), pick.end(), name) == pick.end()) continue;
    auto t0 = std::chrono::steady_clock::now();
    Verdict v;
    try {
      v = fn();
    } catch (const std::exception& e) {
      v = {false, std::string("exception: ") + e.what()};
    }
    std::printf("%s %s: %s [%.1f s]\n", v.pass ? "PASS" : "FAIL", name.c_str(), v.detail.c_str(), seconds_since(t0));
    std::fflush(stdout);
    failed = failed || !v.pass;
  }
  return failed ? 1 : 0;
}
