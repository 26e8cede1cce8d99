#include "vsk/quadrature.hpp"

#include <cmath>
#include <queue>
#include <stdexcept>

namespace vsk::quad {
namespace {

// G7/K15 nodes and weights on [-1,1] (Kronrod extension of 7-point Gauss).
constexpr double kXgk[8] = {
    0.991455371120813, 0.949107912342759, 0.864864423359769,
    0.741531185599394, 0.586087235467691, 0.405845151377397,
    0.207784955007898, 0.000000000000000};
constexpr double kWgk[8] = {
    0.022935322010529, 0.063092092629979, 0.104790010322250,
    0.140653259715525, 0.169004726639267, 0.190350578064785,
    0.204432940075298, 0.209482141084728};
constexpr double kWg[4] = {
    0.129484966168870, 0.279705391489277, 0.381830050505119,
    0.417959183673469};

struct GK {
  double kronrod;
  double err;
};

GK gk15(const Fn& f, double a, double b) {
  const double c = 0.5 * (a + b);
  const double h = 0.5 * (b - a);
  double fv[15];
  for (int i = 0; i < 7; ++i) {
    fv[i] = f(c - h * kXgk[i]);
    fv[14 - i] = f(c + h * kXgk[i]);
  }
  fv[7] = f(c);
  double resk = kWgk[7] * fv[7];
  double resg = kWg[3] * fv[7];
  for (int i = 0; i < 7; ++i) resk += kWgk[i] * (fv[i] + fv[14 - i]);
  for (int i = 0; i < 3; ++i) resg += kWg[i] * (fv[2 * i + 1] + fv[13 - 2 * i]);
  return {resk * h, std::fabs((resk - resg) * h)};
}

struct Interval {
  double a, b, value, err;
  bool operator<(const Interval& o) const { return err < o.err; }
};

}  // namespace

double adaptive(const Fn& f, double a, double b, double rel_tol,
                double abs_tol, int max_intervals) {
  if (a == b) return 0.0;
  GK first = gk15(f, a, b);
  std::priority_queue<Interval> heap;
  heap.push({a, b, first.kronrod, first.err});
  double total = first.kronrod;
  double total_err = first.err;
  while (static_cast<int>(heap.size()) < max_intervals) {
    const double tol = std::max(abs_tol, rel_tol * std::fabs(total));
    if (total_err <= tol) break;
    Interval worst = heap.top();
    heap.pop();
    const double c = 0.5 * (worst.a + worst.b);
    if (c <= worst.a || c >= worst.b) {  // interval at machine resolution
      heap.push({worst.a, worst.b, worst.value, 0.0});
      total_err -= worst.err;
      continue;
    }
    GK left = gk15(f, worst.a, c);
    GK right = gk15(f, c, worst.b);
    total += left.kronrod + right.kronrod - worst.value;
    total_err += left.err + right.err - worst.err;
    heap.push({worst.a, c, left.kronrod, left.err});
    heap.push({c, worst.b, right.kronrod, right.err});
  }
  return total;
}

double singular(const Fn& f, double a, double b, double exp_a, double exp_b,
                double rel_tol, double abs_tol) {
  if (!(exp_a < 1.0) || !(exp_b < 1.0))
    throw std::domain_error("quad::singular: endpoint exponent must be < 1");
  if (a >= b) return 0.0;
  if (exp_a <= 0.0 && exp_b <= 0.0)
    return adaptive(f, a, b, rel_tol, abs_tol);

  const double m = 0.5 * (a + b);
  double left, right;
  if (exp_a > 0.0) {
    const double q = 1.0 / (1.0 - exp_a);
    const double umax = std::pow(m - a, 1.0 - exp_a);
    left = adaptive(
        [&](double u) { return f(a + std::pow(u, q)) * q * std::pow(u, q - 1.0); },
        0.0, umax, rel_tol, abs_tol);
  } else {
    left = adaptive(f, a, m, rel_tol, abs_tol);
  }
  if (exp_b > 0.0) {
    const double q = 1.0 / (1.0 - exp_b);
    const double umax = std::pow(b - m, 1.0 - exp_b);
    right = adaptive(
        [&](double u) { return f(b - std::pow(u, q)) * q * std::pow(u, q - 1.0); },
        0.0, umax, rel_tol, abs_tol);
  } else {
    right = adaptive(f, m, b, rel_tol, abs_tol);
  }
  return left + right;
}

}  // namespace vsk::quad
