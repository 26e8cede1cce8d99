#pragma once

#include <functional>

namespace vsk::quad {

using Fn = std::function<double(double)>;

// Globally adaptive Gauss-Kronrod (G7/K15) on [a,b]: the worst interval is
// split until the error estimate meets tolerance or the interval budget runs
// out. The rule has no endpoint nodes, so integrable endpoint blow-ups
// survive, but accuracy then depends on the caller transforming them away
// first (see singular()).
double adaptive(const Fn& f, double a, double b,
                double rel_tol = 1e-10, double abs_tol = 1e-14,
                int max_intervals = 2000);

// Integral of f over [a,b] where f may behave like (x-a)^{-exp_a} near a and
// (b-x)^{-exp_b} near b, exponents in [0,1). The singular ends are removed by
// the power substitution u = (x-end)^{1-exp}, which turns C*(x-end)^{-exp}
// into a bounded integrand.
double singular(const Fn& f, double a, double b,
                double exp_a, double exp_b,
                double rel_tol = 1e-10, double abs_tol = 1e-14);

}  // namespace vsk::quad
