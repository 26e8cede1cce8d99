#pragma once

#include <functional>
#include <string>
#include <vector>

namespace vsk {

// Algebraic blow-up exponents of kappa(t,s): (t-s)^{-at_diag} as s->t and
// s^{-at_zero} as s->0. Exponents live in [0,1) for integrable kernels; a
// declared exponent >= 1 marks a non-integrable end.
struct Singularity {
  double at_diag = 0.0;
  double at_zero = 0.0;
};

// One-variable profile h(u) on (0,inf), the building block of separable
// kernels kappa(t,s)=h(s) and convolution kernels kappa(t,s)=h(t-s).
struct Profile {
  std::function<double(double)> eval;
  double sing_at_zero = 0.0;  // u^{-sing_at_zero} behavior at u=0
  std::function<double(double, double)> exact_integral;  // optional, (a,b)
  double tail_decay_rate = 0.0;  // h(u) ~ e^{-rate*u} envelope; 0 = undeclared
  std::string label;

  bool has_exact() const { return static_cast<bool>(exact_integral); }
};

// Two-time kernel on the triangle s < t, nonnegative. Immutable after
// construction; any internal memo tables are built eagerly.
struct Kernel {
  std::function<double(double, double)> eval;  // kappa(t,s), s < t
  Singularity sing;
  std::function<double(double, double, double)> exact_cell;  // (t,a,b)
  std::function<double(double, double, double)> modulus;     // (t',t,s)
  std::string label;

  bool has_exact() const { return static_cast<bool>(exact_cell); }
};

// integral of kappa(t,.) over [a,b] with b <= t; closed form when the kernel
// carries one, adaptive quadrature with singularity-splitting otherwise.
double cell_integral(const Kernel& k, double t, double a, double b);
// always-quadrature variant, used to cross-check exact_cell in tests
double cell_integral_quad(const Kernel& k, double t, double a, double b,
                          double rel_tol = 1e-10);

// built-in profiles
Profile constant_profile(double c);
Profile exp_profile(double c, double rate = 1.0);        // c*e^{-rate u}
Profile loglog_profile(double delta);                    // e^{-du}/(u log^2 u)
Profile frac_profile(double alpha);                      // u^{a-1}/Gamma(a)

// built-in kernels
Kernel constant_kernel(double c);
Kernel separable_kernel(const Profile& h);               // kappa(t,s)=h(s)
Kernel convolution_kernel(const Profile& h);             // kappa(t,s)=h(t-s)
Kernel power_kernel(double C0, double alpha, double beta);
Kernel circle_kernel(double C0);                         // C0/sqrt(t^2-s^2)
Kernel semigroup_kernel(double C, double alpha, double delta);
Kernel loglog_kernel(double delta);
Kernel fbm_kernel(double H);                             // K_H of the Volterra
                                                         // representation

// --- classification -------------------------------------------------------

enum class KernelClass {
  InKGt1,        // some beta>1 keeps the power integral bounded
  InK0,          // short-shift integral vanishes, but no beta>1 found
  InKNotK0,      // short-shift limsup strictly between 0 and 1
  NotInK,        // short-shift limsup >= 1
  Inconclusive,  // within 5% of a threshold
};

const char* to_string(KernelClass v);

struct KernelClassReport {
  KernelClass verdict = KernelClass::Inconclusive;
  // (beta, sup_t int_0^t kappa^beta(t,s) ds); inf when non-integrable
  std::vector<std::pair<double, double>> beta_sup;
  // (eps, sup_t int_t^{t+eps} kappa(t+eps,s) ds)
  std::vector<std::pair<double, double>> eps_sup;
  double shift_limit = 0.0;       // extrapolated eps->0 value
  double base_sup_integral = 0.0; // sup_t int_0^t kappa(t,s) ds
};

KernelClassReport classify(const Kernel& k, double T,
                           std::vector<double> beta_candidates = {1.1, 1.5, 2.0},
                           std::vector<double> eps_sequence = {});

struct PaleyWienerResult {
  double integral = 0.0;          // int_0^inf h, tail extrapolated
  bool resolvent_integrable = false;
};

PaleyWienerResult paley_wiener_check(const Profile& h, double T_tail);

}  // namespace vsk
