#include "core/quadrature.hpp"

#include <cmath>
#include <vector>

namespace sg {

namespace {

constexpr double kHalfPi = 1.57079632679489661923;

// One double-exponential refinement pass: sum f over nodes at odd multiples
// of h (all multiples for the first level).
template <class Node>
double de_level(const Node& node, double h, bool first) {
  double sum = 0.0;
  const double tmax = 3.8;
  if (first) {
    double x, w;
    node(0.0, x, w);
    sum += w;
  }
  int kstep = first ? 1 : 2;
  int k0 = first ? 1 : 1;
  for (int sign = -1; sign <= 1; sign += 2) {
    for (int k = k0;; k += kstep) {
      double t = sign * k * h;
      if (std::abs(t) > tmax) break;
      double x, w;
      node(t, x, w);
      if (std::isfinite(w)) sum += w;
    }
  }
  return sum;
}

template <class Node>
Bounded de_integrate(const Node& node, double tol) {
  double h = 0.5;
  double total = de_level(node, h, true);
  double prev = total * h;
  double best = prev;
  double err = std::abs(prev);
  for (int level = 1; level <= 11; ++level) {
    h *= 0.5;
    total += de_level(node, h, false);
    double cur = total * h;
    err = std::abs(cur - prev);
    best = cur;
    prev = cur;
    if (err <= tol * (1.0 + std::abs(cur)) && level >= 3) break;
  }
  return {best, err};
}

}  // namespace

Bounded integrate_finite(const std::function<double(double)>& f, double a,
                         double b, double tol) {
  if (!(b > a)) return {0.0, 0.0};
  const double c = 0.5 * (a + b);
  const double d = 0.5 * (b - a);
  auto node = [&](double t, double& x, double& w) {
    double s = kHalfPi * std::sinh(t);
    double u = std::tanh(s);
    x = c + d * u;
    double dx = d * kHalfPi * std::cosh(t) / (std::cosh(s) * std::cosh(s));
    if (x <= a || x >= b || dx == 0.0) {
      w = 0.0;
      return;
    }
    w = f(x) * dx;
  };
  return de_integrate(node, tol);
}

Bounded integrate_semi_infinite(const std::function<double(double)>& f,
                                double a, double tol) {
  auto node = [&](double t, double& x, double& w) {
    double e = std::exp(kHalfPi * std::sinh(t));
    x = a + e;
    double dx = kHalfPi * std::cosh(t) * e;
    if (!std::isfinite(dx) || dx == 0.0 || x <= a) {
      w = 0.0;
      return;
    }
    w = f(x) * dx;
  };
  return de_integrate(node, tol);
}

}  // namespace sg
