#include <boost/math/special_functions/gamma.hpp>
#include <cmath>
#include <limits>
#include <memory>
#include <stdexcept>
#include <vector>

#include "vsk/kernel.hpp"
#include "vsk/quadrature.hpp"

namespace vsk {

namespace {

// Memoized F(u) = c_H (1/2 - H) int_1^u (r-1)^{H-3/2} (1 - r^{H-1/2}) dr.
// F is nonnegative and increasing; smooth in log u, so the table is
// log-spaced with linear interpolation in log u. Built eagerly, then
// read-only.
class FbmF {
 public:
  FbmF(double H, double cH) : H_(H), pref_(cH * (0.5 - H)) {
    if (std::fabs(H - 0.5) < 1e-14) return;  // F identically zero
    const double lmax = std::log(kUmax);
    const int n = 800;
    logu_.resize(n + 1);
    F_.resize(n + 1);
    logu_[0] = 0.0;
    F_[0] = 0.0;
    double acc = 0.0;
    double prev = 1.0;
    for (int i = 1; i <= n; ++i) {
      logu_[i] = lmax * i / n;
      const double u = std::exp(logu_[i]);
      acc += pref_ * segment(prev, u);
      F_[i] = acc;
      prev = u;
    }
  }

  double operator()(double u) const {
    if (u <= 1.0 || F_.empty()) return 0.0;
    const double lu = std::log(u);
    if (lu >= logu_.back()) {
      // power-law continuation: F ~ u^{2H-1} for H > 1/2, constant for H < 1/2
      if (H_ < 0.5) return F_.back();
      const std::size_t n = F_.size() - 1;
      const double slope = (std::log(F_[n]) - std::log(F_[n - 1])) /
                           (logu_[n] - logu_[n - 1]);
      return F_[n] * std::exp(slope * (lu - logu_[n]));
    }
    const double step = logu_[1];
    const std::size_t i = std::min(
        static_cast<std::size_t>(lu / step), logu_.size() - 2);
    const double w = (lu - logu_[i]) / step;
    return F_[i] * (1.0 - w) + F_[i + 1] * w;
  }

 private:
  static constexpr double kUmax = 1e12;

  // int_a^b (r-1)^{H-3/2} (1 - r^{H-1/2}) dr; the left edge of the first
  // segment carries the (r-1)^{H-1/2} blow-up (after the 1 - r^e factor
  // contributes its (r-1) zero), removed by the power substitution.
  double segment(double a, double b) const {
    const double e = H_ - 0.5;
    auto f = [this, e](double r) {
      const double rm1 = r - 1.0;
      // 1 - r^e via expm1 to survive r near 1
      const double one_minus_re = -std::expm1(e * std::log(r));
      return std::pow(rm1, e - 1.0) * one_minus_re;
    };
    const double exp_a = (a == 1.0) ? std::max(0.0, 0.5 - H_) : 0.0;
    return quad_singular_left(f, a, b, exp_a);
  }

  template <typename F>
  double quad_singular_left(F f, double a, double b, double exp_a) const {
    if (exp_a <= 0.0) return quad::adaptive(f, a, b, 1e-10, 1e-15);
    const double q = 1.0 / (1.0 - exp_a);
    const double umax = std::pow(b - a, 1.0 - exp_a);
    return quad::adaptive(
        [&](double u) { return f(a + std::pow(u, q)) * q * std::pow(u, q - 1.0); },
        0.0, umax, 1e-10, 1e-15);
  }

  double H_;
  double pref_;
  std::vector<double> logu_, F_;
};

}  // namespace

Kernel fbm_kernel(double H) {
  if (!(H > 0.0 && H < 1.0))
    throw std::invalid_argument("fbm_kernel: H must be in (0,1)");
  const double cH = std::sqrt(
      2.0 * H * boost::math::tgamma(1.5 - H) /
      (boost::math::tgamma(H + 0.5) * boost::math::tgamma(2.0 - 2.0 * H)));
  auto F = std::make_shared<const FbmF>(H, cH);

  Kernel k;
  const double e = H - 0.5;
  k.eval = [H, cH, e, F](double t, double s) {
    if (s >= t) return 0.0;
    if (std::fabs(e) < 1e-14) return 1.0;
    if (s <= 0.0) return std::numeric_limits<double>::infinity();
    return cH * std::pow(t - s, e) + std::pow(s, e) * (*F)(t / s);
  };
  k.sing.at_diag = std::max(0.0, 0.5 - H);
  k.sing.at_zero = std::fabs(e) < 1e-14 ? 0.0 : std::fabs(e);
  k.label = "fbm";
  return k;
}

}  // namespace vsk
