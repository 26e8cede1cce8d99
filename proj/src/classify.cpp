#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "vsk/kernel.hpp"
#include "vsk/quadrature.hpp"

namespace vsk {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// sup over a t-grid of int_0^t kappa^pow(t,s) ds. The grid reaches down
// geometrically toward t=0 so blow-up of the essential sup at the origin is
// visible; a growing trend at the small end is reported as infinity.
double sup_power_integral(const Kernel& k, double T, double pow_exp) {
  const double ea = pow_exp * k.sing.at_zero;
  const double eb = pow_exp * k.sing.at_diag;
  if (ea >= 1.0 || eb >= 1.0) return kInf;

  std::vector<double> ts;
  for (double t = T; t > 1e-7 * T; t *= 0.5) ts.push_back(t);
  for (int i = 1; i <= 16; ++i) ts.push_back(T * i / 16.0);
  std::sort(ts.begin(), ts.end());

  std::vector<double> vals(ts.size());
  for (std::size_t i = 0; i < ts.size(); ++i) {
    const double t = ts[i];
    vals[i] = quad::singular(
        [&](double s) { return std::pow(k.eval(t, s), pow_exp); }, 0.0, t, ea,
        eb, 1e-8, 1e-13);
  }
  // divergence toward t=0: strictly growing values as t decreases
  if (vals.size() > 3 && vals[0] > vals[1] * 1.05 && vals[1] > vals[2] * 1.05)
    return kInf;
  return *std::max_element(vals.begin(), vals.end());
}

// sup over t in [0, T-eps] of int_t^{t+eps} kappa(t+eps,s) ds
double sup_shift_integral(const Kernel& k, double T, double eps) {
  std::vector<double> ts{0.0};
  for (double t = (T - eps); t > 1e-7 * T; t *= 0.5) ts.push_back(t);
  for (int i = 1; i <= 16; ++i) ts.push_back((T - eps) * i / 16.0);
  double sup = 0.0;
  for (double t : ts) {
    if (t < 0.0) continue;
    sup = std::max(sup, cell_integral(k, t + eps, t, t + eps));
  }
  return sup;
}

double extrapolate_shift_limit(const std::vector<std::pair<double, double>>& s) {
  const std::size_t n = s.size();
  if (n == 0) return 0.0;
  if (n < 3) return s.back().second;
  const double a = s[n - 3].second, b = s[n - 2].second, c = s[n - 1].second;
  const double d1 = b - a, d2 = c - b;
  if (std::fabs(d2 - d1) < 1e-12 || std::fabs(d2) < 1e-9) return c;
  const double aitken = c - d2 * d2 / (d2 - d1);
  // fall back to the last value when the sequence is not settling
  if (!(std::isfinite(aitken)) || aitken < 0.0 || std::fabs(aitken - c) > std::fabs(c))
    return c;
  return aitken;
}

}  // namespace

const char* to_string(KernelClass v) {
  switch (v) {
    case KernelClass::InKGt1: return "in-K>1";
    case KernelClass::InK0: return "in-K0";
    case KernelClass::InKNotK0: return "in-K-not-K0";
    case KernelClass::NotInK: return "not-in-K";
    case KernelClass::Inconclusive: return "inconclusive";
  }
  return "?";
}

KernelClassReport classify(const Kernel& k, double T,
                           std::vector<double> beta_candidates,
                           std::vector<double> eps_sequence) {
  if (!(T > 0.0)) throw std::invalid_argument("classify: T must be positive");
  if (eps_sequence.empty())
    eps_sequence = {0.1 * T, 0.05 * T, 0.025 * T, 0.0125 * T, 0.00625 * T};

  KernelClassReport rep;
  rep.base_sup_integral = sup_power_integral(k, T, 1.0);

  bool any_beta_finite = false;
  for (double b : beta_candidates) {
    if (!(b > 1.0)) continue;
    const double v = sup_power_integral(k, T, b);
    rep.beta_sup.emplace_back(b, v);
    if (std::isfinite(v)) any_beta_finite = true;
  }

  for (double e : eps_sequence)
    rep.eps_sup.emplace_back(e, sup_shift_integral(k, T, e));
  std::sort(rep.eps_sup.begin(), rep.eps_sup.end(),
            [](auto& a, auto& b) { return a.first > b.first; });
  rep.shift_limit = extrapolate_shift_limit(rep.eps_sup);

  const double L = rep.shift_limit;
  const double s_first = rep.eps_sup.front().second;
  const double s_last = rep.eps_sup.back().second;
  const bool vanishing = s_last < 0.025 && s_last <= 0.5 * std::max(s_first, 1e-30);

  // thresholds carry a 5% inconclusive band
  if (std::isfinite(rep.base_sup_integral) && any_beta_finite && L < 0.95) {
    rep.verdict = KernelClass::InKGt1;
  } else if (vanishing && std::isfinite(rep.base_sup_integral)) {
    rep.verdict = KernelClass::InK0;
  } else if (L < 0.95 && std::isfinite(rep.base_sup_integral)) {
    rep.verdict = KernelClass::InKNotK0;
  } else if (L <= 1.05 && L >= 0.95) {
    rep.verdict = KernelClass::Inconclusive;
  } else {
    rep.verdict = KernelClass::NotInK;
  }
  return rep;
}

}  // namespace vsk
