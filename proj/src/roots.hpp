// Bracketed scalar root finding and unimodal maximization.
#pragma once

#include <cmath>
#include <functional>
#include <stdexcept>
#include <string>

namespace wedgeshock::detail {

// Bisection on a sign-changing bracket, then secant polish while it stays inside.
inline double bisect_secant(const std::function<double(double)>& f, double a, double b,
                            double ftol = 1e-12, const char* who = "bisect_secant") {
  double fa = f(a), fb = f(b);
  if (fa == 0.0) return a;
  if (fb == 0.0) return b;
  if ((fa > 0) == (fb > 0))
    throw std::domain_error(std::string(who) + ": root not bracketed");
  for (int it = 0; it < 200; ++it) {
    double m = 0.5 * (a + b);
    if (m <= std::min(a, b) || m >= std::max(a, b)) break;
    double fm = f(m);
    if (fm == 0.0) return m;
    if ((fm > 0) == (fa > 0)) {
      a = m;
      fa = fm;
    } else {
      b = m;
      fb = fm;
    }
    if (std::abs(b - a) <= 4e-16 * std::max(1.0, std::abs(m))) break;
  }
  double x = std::abs(fa) < std::abs(fb) ? a : b;
  double fx = std::min(std::abs(fa), std::abs(fb));
  if (fx <= ftol) return x;
  // secant between the bracket ends
  double lo = std::min(a, b), hi = std::max(a, b);
  double x0 = a, x1 = b, f0 = fa, f1 = fb;
  for (int it = 0; it < 20 && f1 != f0; ++it) {
    double x2 = x1 - f1 * (x1 - x0) / (f1 - f0);
    if (!(x2 >= lo && x2 <= hi)) break;
    double f2 = f(x2);
    if (std::abs(f2) < fx) {
      x = x2;
      fx = std::abs(f2);
    }
    if (fx <= ftol) break;
    x0 = x1;
    f0 = f1;
    x1 = x2;
    f1 = f2;
  }
  return x;
}

// Golden-section search for the maximum of a unimodal function on [a, b].
inline double golden_max(const std::function<double(double)>& f, double a, double b,
                         double xtol = 1e-10) {
  const double g = 0.5 * (std::sqrt(5.0) - 1.0);
  double c = b - g * (b - a), d = a + g * (b - a);
  double fc = f(c), fd = f(d);
  while (b - a > xtol) {
    if (fc > fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - g * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + g * (b - a);
      fd = f(d);
    }
  }
  return 0.5 * (a + b);
}

}  // namespace wedgeshock::detail
