#include "decision_gate/chi_square.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace dgate {

namespace {

// Regularized lower incomplete gamma P(a,x) by series expansion (x < a+1).
double gamma_p_series(double a, double x) {
  double ap = a;
  double sum = 1.0 / a;
  double term = sum;
  for (int n = 0; n < 500; ++n) {
    ap += 1.0;
    term *= x / ap;
    sum += term;
    if (std::fabs(term) < std::fabs(sum) * 1e-16) break;
  }
  return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

// Regularized upper incomplete gamma Q(a,x) by Lentz continued fraction (x >= a+1).
double gamma_q_cf(double a, double x) {
  constexpr double tiny = 1e-300;
  double b = x + 1.0 - a;
  double c = 1.0 / tiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i <= 500; ++i) {
    double an = -i * (i - a);
    b += 2.0;
    d = an * d + b;
    if (std::fabs(d) < tiny) d = tiny;
    c = b + an / c;
    if (std::fabs(c) < tiny) c = tiny;
    d = 1.0 / d;
    double delta = d * c;
    h *= delta;
    if (std::fabs(delta - 1.0) < 1e-16) break;
  }
  return h * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

}  // namespace

double chi_square_sf(double x, int df) {
  if (df < 1) throw std::domain_error("chi_square_sf: df must be >= 1");
  if (!(x >= 0.0)) throw std::domain_error("chi_square_sf: x must be >= 0");
  if (x == 0.0) return 1.0;

  const double a = 0.5 * df;
  const double h = 0.5 * x;
  if (h < a + 1.0) return 1.0 - gamma_p_series(a, h);
  return gamma_q_cf(a, h);
}

}  // namespace dgate
