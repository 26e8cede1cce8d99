#include "vsk/kernel.hpp"

#include <boost/math/special_functions/beta.hpp>
#include <boost/math/special_functions/gamma.hpp>
#include <cmath>
#include <stdexcept>

#include "vsk/quadrature.hpp"

namespace vsk {

double cell_integral_quad(const Kernel& k, double t, double a, double b,
                          double rel_tol) {
  if (!(a < b) || b > t * (1.0 + 1e-12))
    throw std::invalid_argument("cell_integral: need a < b <= t");
  const bool touches_diag = (t - b) < 1e-13 * std::max(t, 1.0);
  const bool touches_zero = a <= 0.0;
  if (touches_diag && k.sing.at_diag >= 1.0)
    throw std::domain_error("cell_integral: non-integrable diagonal singularity");
  if (touches_zero && k.sing.at_zero >= 1.0)
    throw std::domain_error("cell_integral: non-integrable singularity at s=0");
  const double exp_b = touches_diag ? k.sing.at_diag : 0.0;
  const double exp_a = touches_zero ? k.sing.at_zero : 0.0;
  const double bb = touches_diag ? t : b;
  return quad::singular([&](double s) { return k.eval(t, s); }, a, bb, exp_a,
                        exp_b, rel_tol);
}

double cell_integral(const Kernel& k, double t, double a, double b) {
  if (!(a < b) || b > t * (1.0 + 1e-12))
    throw std::invalid_argument("cell_integral: need a < b <= t");
  const bool touches_diag = (t - b) < 1e-13 * std::max(t, 1.0);
  if (touches_diag && k.sing.at_diag >= 1.0)
    throw std::domain_error("cell_integral: non-integrable diagonal singularity");
  if (k.has_exact()) return k.exact_cell(t, a, b);
  return cell_integral_quad(k, t, a, b);
}

// --- profiles --------------------------------------------------------------

Profile constant_profile(double c) {
  if (c < 0.0) throw std::invalid_argument("constant_profile: c must be >= 0");
  Profile p;
  p.eval = [c](double) { return c; };
  p.exact_integral = [c](double a, double b) { return c * (b - a); };
  p.label = "constant";
  return p;
}

Profile exp_profile(double c, double rate) {
  if (c < 0.0 || rate <= 0.0)
    throw std::invalid_argument("exp_profile: need c >= 0, rate > 0");
  Profile p;
  p.eval = [c, rate](double u) { return c * std::exp(-rate * u); };
  p.exact_integral = [c, rate](double a, double b) {
    return (c / rate) * (std::exp(-rate * a) - std::exp(-rate * b));
  };
  p.tail_decay_rate = rate;
  p.label = "exp";
  return p;
}

Profile loglog_profile(double delta) {
  if (delta <= 0.0) throw std::invalid_argument("loglog_profile: delta > 0");
  // e^{-delta u} / (u log^2 u) near u = 0; the log factor is clamped at
  // u = 1/2 so the profile stays integrable through u = 1.
  Profile p;
  p.eval = [delta](double u) {
    const double lg = std::log(std::min(u, 0.5));
    return std::exp(-delta * u) / (u * lg * lg);
  };
  // 1/(u log^2 u) is integrable but worse than any power; v = -1/log u turns
  // the piece below the clamp into the bounded integrand e^{-delta e^{-1/v}}
  p.exact_integral = [delta](double a, double b) {
    const double m = 0.5;
    double out = 0.0;
    if (a < m) {
      auto v_of = [](double u) { return -1.0 / std::log(u); };
      const double va = (a <= 0.0) ? 0.0 : v_of(a);
      const double vb = v_of(std::min(b, m));
      out += quad::adaptive(
          [delta](double v) { return std::exp(-delta * std::exp(-1.0 / v)); },
          va, vb, 1e-12);
    }
    if (b > m) {
      const double lg2 = std::log(m) * std::log(m);
      out += quad::adaptive(
          [delta, lg2](double u) { return std::exp(-delta * u) / (u * lg2); },
          std::max(a, m), b, 1e-12);
    }
    return out;
  };
  p.sing_at_zero = 0.999;  // metadata only; the exact integral above is used
  p.tail_decay_rate = delta;
  p.label = "loglog";
  return p;
}

Profile frac_profile(double alpha) {
  if (alpha <= 0.0 || alpha > 1.0)
    throw std::invalid_argument("frac_profile: alpha in (0,1]");
  const double ginv = 1.0 / boost::math::tgamma(alpha);
  const double ginv1 = 1.0 / boost::math::tgamma(alpha + 1.0);
  Profile p;
  p.eval = [alpha, ginv](double u) { return std::pow(u, alpha - 1.0) * ginv; };
  p.exact_integral = [alpha, ginv1](double a, double b) {
    return (std::pow(b, alpha) - std::pow(a, alpha)) * ginv1;
  };
  p.sing_at_zero = 1.0 - alpha;
  p.label = "frac";
  return p;
}

// --- kernels ---------------------------------------------------------------

Kernel constant_kernel(double c) {
  if (c < 0.0) throw std::invalid_argument("constant_kernel: c must be >= 0");
  Kernel k;
  k.eval = [c](double, double) { return c; };
  k.exact_cell = [c](double, double a, double b) { return c * (b - a); };
  k.label = "constant";
  return k;
}

Kernel separable_kernel(const Profile& h) {
  Kernel k;
  auto h_eval = h.eval;
  k.eval = [h_eval](double, double s) { return h_eval(s); };
  k.sing.at_zero = h.sing_at_zero;
  if (h.has_exact()) {
    auto hi = h.exact_integral;
    k.exact_cell = [hi](double, double a, double b) { return hi(a, b); };
  }
  k.label = "separable(" + h.label + ")";
  return k;
}

Kernel convolution_kernel(const Profile& h) {
  Kernel k;
  auto h_eval = h.eval;
  k.eval = [h_eval](double t, double s) { return h_eval(t - s); };
  k.sing.at_diag = h.sing_at_zero;
  if (h.has_exact()) {
    auto hi = h.exact_integral;
    k.exact_cell = [hi](double t, double a, double b) { return hi(t - b, t - a); };
  }
  k.label = "convolution(" + h.label + ")";
  return k;
}

Kernel power_kernel(double C0, double alpha, double beta) {
  if (C0 < 0.0 || alpha < 0.0 || beta < 0.0 || alpha >= 1.0 || beta >= 1.0)
    throw std::invalid_argument("power_kernel: need C0 >= 0, alpha, beta in [0,1)");
  Kernel k;
  k.eval = [C0, alpha, beta](double t, double s) {
    return C0 * std::pow(t - s, -alpha) * std::pow(s, -beta);
  };
  k.sing.at_diag = alpha;
  k.sing.at_zero = beta;
  // int_a^b (t-s)^{-alpha} s^{-beta} ds = t^{1-alpha-beta} * incomplete Beta
  // in x = s/t with parameters (1-beta, 1-alpha)
  k.exact_cell = [C0, alpha, beta](double t, double a, double b) {
    const double hi = boost::math::beta(1.0 - beta, 1.0 - alpha,
                                        std::min(b / t, 1.0));
    const double lo = (a <= 0.0) ? 0.0
                                 : boost::math::beta(1.0 - beta, 1.0 - alpha, a / t);
    return C0 * std::pow(t, 1.0 - alpha - beta) * (hi - lo);
  };
  k.modulus = [C0, alpha, beta](double tp, double t, double s) {
    return C0 * std::pow(s, -beta) *
           std::fabs(std::pow(t - s, -alpha) - std::pow(tp - s, -alpha));
  };
  k.label = "power";
  return k;
}

Kernel circle_kernel(double C0) {
  if (C0 < 0.0) throw std::invalid_argument("circle_kernel: C0 must be >= 0");
  Kernel k;
  k.eval = [C0](double t, double s) { return C0 / std::sqrt(t * t - s * s); };
  k.sing.at_diag = 0.5;
  // int_a^b C0/sqrt(t^2-s^2) ds = C0 (asin(b/t) - asin(a/t))
  k.exact_cell = [C0](double t, double a, double b) {
    return C0 * (std::asin(std::min(b / t, 1.0)) - std::asin(a / t));
  };
  k.label = "circle";
  return k;
}

Kernel semigroup_kernel(double C, double alpha, double delta) {
  if (C < 0.0 || alpha < 0.0 || alpha >= 1.0 || delta < 0.0)
    throw std::invalid_argument("semigroup_kernel: need C >= 0, alpha in [0,1), delta >= 0");
  Kernel k;
  k.eval = [C, alpha, delta](double t, double s) {
    return C * std::pow(t - s, -alpha) * std::exp(-delta * (t - s));
  };
  k.sing.at_diag = alpha;
  // int in u = t-s of u^{-alpha} e^{-delta u}: lower incomplete gamma
  k.exact_cell = [C, alpha, delta](double t, double a, double b) {
    const double lo = t - b;
    const double hi = t - a;
    if (delta == 0.0)
      return C * (std::pow(hi, 1.0 - alpha) - std::pow(lo, 1.0 - alpha)) /
             (1.0 - alpha);
    const double g_hi = boost::math::tgamma_lower(1.0 - alpha, delta * hi);
    const double g_lo =
        (lo <= 0.0) ? 0.0 : boost::math::tgamma_lower(1.0 - alpha, delta * lo);
    return C * std::pow(delta, alpha - 1.0) * (g_hi - g_lo);
  };
  k.modulus = [C, alpha, delta](double tp, double t, double s) {
    return C * std::fabs(std::pow(t - s, -alpha) * std::exp(-delta * (t - s)) -
                         std::pow(tp - s, -alpha) * std::exp(-delta * (tp - s)));
  };
  k.label = "semigroup";
  return k;
}

Kernel loglog_kernel(double delta) {
  Kernel k = convolution_kernel(loglog_profile(delta));
  k.label = "loglog";
  return k;
}

// --- Paley-Wiener ----------------------------------------------------------

PaleyWienerResult paley_wiener_check(const Profile& h, double T_tail) {
  if (!(T_tail > 0.0))
    throw std::invalid_argument("paley_wiener_check: T_tail must be positive");
  if (h.tail_decay_rate <= 0.0)
    throw std::domain_error(
        "paley_wiener_check: profile declares no tail decay, cannot extrapolate");
  PaleyWienerResult res;
  const double body =
      h.has_exact() ? h.exact_integral(0.0, T_tail)
                    : quad::singular(h.eval, 0.0, T_tail, h.sing_at_zero, 0.0,
                                     1e-10);
  // tail bounded by pure exponential continuation from T_tail
  const double tail = h.eval(T_tail) / h.tail_decay_rate;
  res.integral = body + tail;
  res.resolvent_integrable = res.integral < 1.0;
  return res;
}

}  // namespace vsk
