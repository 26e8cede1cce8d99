// End-to-end acceptance checks: one line per criterion, nonzero exit if any
// fail. Each check states its oracle inline; tolerances are fixed, not fitted.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <algorithm>
#include <memory>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "vsk/ldp.hpp"
#include "vsk/resolvent.hpp"
#include "vsk/runner.hpp"
#include "vsk/sde.hpp"
#include "vsk/spectral.hpp"

#include "oracles.hpp"

using namespace vsk;
using clk = std::chrono::steady_clock;

namespace {

int g_failures = 0;

struct Criterion {
  int id;
  const char* name;
  std::ostringstream detail;
  clk::time_point start = clk::now();
  bool ok = true;

  Criterion(int i, const char* n) : id(i), name(n) {}
  void require(bool cond, const std::string& what) {
    if (!cond) {
      ok = false;
      detail << " [" << what << "]";
    }
  }
  ~Criterion() {
    const double secs =
        std::chrono::duration<double>(clk::now() - start).count();
    std::printf("%s  %2d  %-34s (%.1fs)%s\n", ok ? "PASS" : "FAIL", id, name,
                secs, detail.str().c_str());
    std::fflush(stdout);
    if (!ok) ++g_failures;
  }
};

double sup_rel(const std::vector<double>& got,
               const std::vector<double>& want) {
  double err = 0.0, scale = 0.0;
  for (double w : want) scale = std::max(scale, std::fabs(w));
  for (std::size_t i = 0; i < got.size(); ++i)
    err = std::max(err, std::fabs(got[i] - want[i]));
  return err / scale;
}

double table_sup_rel_exp(const ResolventTable& R, double c) {
  double err = 0.0;
  const auto& g = R.table.grid;
  for (std::size_t i = 1; i < R.table.rows(); ++i)
    for (std::size_t j = 0; j < i; ++j) {
      const double want = c * std::exp(c * (g.nodes[i] - g.nodes[j]));
      err = std::max(err, std::fabs(R.table.at(i, j) - want) / want);
    }
  return err;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

Coefficients linear_coeffs(double kap, double sigma, double x0) {
  Coefficients c;
  c.g = [x0](double) { return Vec{x0}; };
  auto ker = std::make_shared<Kernel>(constant_kernel(kap));
  c.kappa_A = ker;
  c.a = [](double, const Vec& x) { return Vec{x[0]}; };
  c.A = [kap](double, double, const Vec& x) { return Vec{kap * x[0]}; };
  c.B = [sigma](double, double, const Vec&) { return Mat{sigma}; };
  c.kappa1 = ker;
  return c;
}

void criterion_1() {
  Criterion c(1, "resolvent closed forms");
  const double cc = 1.0;
  for (bool separable : {false, true}) {
    const Kernel k = separable ? separable_kernel(constant_profile(cc))
                               : constant_kernel(cc);
    double prev = 0.0;
    for (std::size_t N : {512, 1024}) {
      const Grid g = make_grid(1.0, N, GridKind::Uniform);
      const auto R = resolvent_sum(k, g);
      const double err = table_sup_rel_exp(R, cc);
      if (N == 512) {
        c.require(err < 0.02, "sup rel err " + std::to_string(err));
        prev = err;
      } else {
        c.require(err < 0.6 * prev, "refinement did not halve the error");
      }
    }
  }
}

void criterion_2() {
  Criterion c(2, "resolvent identity residual");
  const std::vector<std::pair<const char*, Kernel>> kernels = {
      {"constant", constant_kernel(0.8)},
      {"separable", separable_kernel(exp_profile(0.7))},
      {"power", power_kernel(1.0, 0.3, 0.2)}};
  for (const auto& [name, k] : kernels) {
    double prev = 0.0;
    for (std::size_t N : {96, 192}) {
      const Grid g = make_grid(1.0, N, GridKind::Uniform);
      const auto R = resolvent_sum(k, g);
      const double res = identity_residual(k, R);
      if (N == 96)
        prev = res;
      else
        c.require(res * 1.5 <= prev,
                  std::string(name) + " ratio " + std::to_string(prev / res));
    }
  }
}

void criterion_3() {
  Criterion c(3, "non-unique fixed points");
  // Every multiple of each profile is also a fixed point (the fixed-point
  // set is a ray), so the seeds sit on the profile itself and the check is
  // that the sweeps keep it there up to discretization error.
  {  // x(t) = t for the critical circle kernel
    const Grid g = make_grid(1.0, 512, GridKind::Graded, 2.0);
    std::vector<double> seed(g.nodes), zero(g.nodes.size(), 0.0);
    const auto fp = fixed_point_volterra(zero, circle_kernel(1.0), g, seed);
    c.require(sup_rel(fp.x, g.nodes) < 0.02, "circle sup err");
  }
  {  // x(t) = sqrt(t) for the critical power kernel
    const Grid g = make_grid(1.0, 512, GridKind::Graded, 2.0);
    std::vector<double> want(g.nodes.size());
    std::vector<double> zero(g.nodes.size(), 0.0);
    for (std::size_t i = 0; i < want.size(); ++i)
      want[i] = std::sqrt(g.nodes[i]);
    const auto fp =
        fixed_point_volterra(zero, power_kernel(0.5, 0.5, 0.5), g, want);
    c.require(sup_rel(fp.x, want) < 0.02, "power sup err");
  }
  {  // subcritical exponents contract to zero from a bounded seed
    const Grid g = make_grid(1.0, 256, GridKind::Graded, 2.0);
    std::vector<double> seed(g.nodes.size(), 1.0), zero(g.nodes.size(), 0.0);
    const auto fp =
        fixed_point_volterra(zero, power_kernel(0.5, 0.3, 0.2), g, seed);
    double sup = 0.0;
    for (double v : fp.x) sup = std::max(sup, std::fabs(v));
    c.require(sup < 0.01, "subcritical seed did not vanish");
  }
}

void criterion_4() {
  Criterion c(4, "convolution resolvent");
  const Grid g = make_grid(1.0, 2048, GridKind::Uniform);
  for (double cc : {0.25, 0.5, 0.9}) {
    const auto a = convolution_resolvent(exp_profile(cc), g);
    std::vector<double> want(g.nodes.size());
    for (std::size_t i = 0; i < want.size(); ++i)
      want[i] = cc * std::exp(-(1.0 - cc) * g.nodes[i]);
    std::vector<double> got(a.a.begin(), a.a.end());
    got[0] = want[0];  // a(0) carries the full point mass convention
    double err = 0.0;
    for (std::size_t i = 1; i < want.size(); ++i)
      err = std::max(err, std::fabs(got[i] - want[i]) / want[i]);
    c.require(err < 0.01, "c=" + std::to_string(cc));
  }
  // c=1.1: a(t) = 1.1 e^{0.1 t} grows; use a horizon long enough to see it
  const Grid glong = make_grid(20.0, 4096, GridKind::Uniform);
  const auto grow = convolution_resolvent(exp_profile(1.1), glong);
  c.require(grow.a.back() > 2.0 * grow.a[1], "c=1.1 did not grow");
}

void criterion_5() {
  Criterion c(5, "Mittag-Leffler relaxation");
  const Grid g = make_grid(1.0, 1024, GridKind::Graded, 2.0);
  const auto s = material_resolvent(frac_profile(0.5), 1.0, g);
  double err = 0.0;
  for (std::size_t i = 0; i < g.nodes.size(); ++i) {
    const double want = oracle::mittag_leffler(0.5, -std::sqrt(g.nodes[i]));
    err = std::max(err, std::fabs(s[i] - want) / std::fabs(want));
  }
  c.require(err < 0.01, "sup rel err " + std::to_string(err));
}

void criterion_6() {
  Criterion c(6, "fbm law");
  const Grid g = make_grid(1.0, 128, GridKind::Uniform);
  const std::size_t P = 10000;
  const auto w = sample_wiener(g, 1, P, 606);
  const std::vector<std::size_t> nodes{32, 64, 96, 128};
  for (double H : {0.3, 0.5, 0.7}) {
    const auto f = fbm_from_wiener(w, H);
    if (H == 0.5) {
      double dmax = 0.0;
      for (std::size_t p = 0; p < P; ++p)
        for (std::size_t j = 0; j < 128; ++j)
          dmax = std::max(dmax, std::fabs(f.dW(p, j, 0) - w.dW(p, j, 0)));
      c.require(dmax < 1e-12, "H=0.5 is not the Wiener path");
    }
    const auto cov = empirical_covariance(f, nodes);
    const std::vector<std::pair<std::size_t, std::size_t>> pairs{
        {0, 0}, {1, 1}, {3, 3}, {1, 3}, {0, 2}};
    for (const auto& [a, b] : pairs) {
      const double s = g.nodes[nodes[a]], t = g.nodes[nodes[b]];
      const double want = 0.5 * (std::pow(s, 2 * H) + std::pow(t, 2 * H) -
                                 std::pow(std::fabs(t - s), 2 * H));
      c.require(std::fabs(cov.cov[a][b] - want) < 3.0 * cov.se[a][b],
                "H=" + std::to_string(H) + " pair " + std::to_string(a) + "," +
                    std::to_string(b));
    }
  }
}

void criterion_7() {
  Criterion c(7, "sde mean/variance oracles");
  {
    const Grid g = make_grid(1.0, 64, GridKind::Uniform);
    const std::size_t P = 10000;
    const auto noise = sample_wiener(g, 1, P, 707);
    const auto coef = linear_coeffs(0.8, 0.3, 1.0);
    const auto r = euler_solve(coef, noise, {});
    const std::vector<double> ones(65, 1.0);
    const auto det = linear_volterra_solve(ones, constant_kernel(0.8), g);
    for (std::size_t i = 1; i <= 64; ++i) {
      double m = 0.0, s2 = 0.0;
      for (std::size_t p = 0; p < P; ++p) m += r.at(p, i);
      m /= static_cast<double>(P);
      for (std::size_t p = 0; p < P; ++p) {
        const double d = r.at(p, i) - m;
        s2 += d * d;
      }
      const double se =
          std::sqrt(s2 / static_cast<double>(P - 1) / static_cast<double>(P));
      if (std::fabs(m - det[i]) >= 3.0 * se) {
        c.require(false, "mean mismatch at node " + std::to_string(i));
        break;
      }
    }
  }
  {
    const double lam = 1.0, sigma = 0.5, x0 = 0.3;
    const Grid g = make_grid(1.0, 128, GridKind::Uniform);
    const std::size_t P = 10000;
    const auto noise = sample_wiener(g, 1, P, 717);
    Coefficients coef;
    coef.g = [&](double t) { return Vec{x0 * std::exp(-lam * t)}; };
    // declared factorization: exact cell averages of the semigroup factor
    coef.kappa_B =
        std::make_shared<Kernel>(convolution_kernel(exp_profile(1.0, lam)));
    coef.b = [sigma](double, const Vec&) { return Mat{sigma}; };
    coef.B = [&](double t, double s, const Vec&) {
      return Mat{sigma * std::exp(-lam * (t - s))};
    };
    const auto r = euler_solve(coef, noise, {});
    double m2 = 0.0;
    for (std::size_t p = 0; p < P; ++p) m2 += r.at(p, 128) * r.at(p, 128);
    m2 /= static_cast<double>(P);
    const double exact =
        x0 * x0 * std::exp(-2.0 * lam) +
        sigma * sigma * -std::expm1(-2.0 * lam) / (2.0 * lam);
    c.require(std::fabs(m2 - exact) < 3.0 * exact * std::sqrt(2.0 / P),
              "OU second moment " + std::to_string(m2) + " vs " +
                  std::to_string(exact));
  }
}

void criterion_8() {
  Criterion c(8, "picard/euler agreement");
  const Grid g = make_grid(1.0, 128, GridKind::Uniform);
  const auto noise = sample_wiener(g, 1, 100, 808);
  Coefficients coef;
  coef.g = [](double t) { return Vec{0.5 + 0.1 * t}; };
  coef.A = [](double, double, const Vec& x) { return Vec{0.4 * std::cos(x[0])}; };
  coef.B = [](double, double, const Vec& x) {
    return Mat{0.3 / (1.0 + x[0] * x[0])};
  };
  SolveConfig cfg;
  cfg.picard_tol = 1e-8;
  cfg.picard_iters = 200;
  const auto pe = euler_solve(coef, noise, cfg);
  const auto pp = picard_solve(coef, noise, cfg);
  double dmax = 0.0;
  for (std::size_t p = 0; p < 100; ++p)
    for (std::size_t i = 0; i <= 128; ++i)
      dmax = std::max(dmax, std::fabs(pe.at(p, i) - pp.at(p, i)));
  c.require(dmax < 1e-6, "pathwise sup distance " + std::to_string(dmax));
}

void criterion_9() {
  Criterion c(9, "holder exponents");
  const Grid g = make_grid(1.0, 512, GridKind::Uniform);
  const auto w = sample_wiener(g, 1, 200, 909);
  Coefficients id;
  id.g = [](double) { return Vec{0.0}; };
  id.B = [](double, double, const Vec&) { return Mat{1.0}; };
  const auto hb = holder_report(euler_solve(id, w, {}));
  c.require(std::fabs(hb.exponent - 0.5) < 0.05,
            "brownian " + std::to_string(hb.exponent));
  for (double H : {0.7, 0.3}) {
    const auto f = fbm_from_wiener(w, H);
    const auto hf = holder_report(euler_solve(id, f, {}));
    c.require(std::fabs(hf.exponent - H) < 0.05,
              "H=" + std::to_string(H) + " estimate " +
                  std::to_string(hf.exponent));
  }
}

void criterion_10() {
  Criterion c(10, "localization monotonicity");
  const Grid g = make_grid(1.0, 64, GridKind::Uniform);
  const auto noise = sample_wiener(g, 1, 2000, 1010);
  const auto coef = linear_coeffs(0.8, 0.9, 1.0);
  const std::vector<double> radii{2.0, 3.0, 4.5, 7.0};
  std::vector<PathResult> res;
  for (double R : radii) {
    SolveConfig cfg;
    cfg.stop_radius = R;
    res.push_back(euler_solve(coef, noise, cfg));
  }
  for (std::size_t r = 1; r < radii.size(); ++r)
    for (std::size_t p = 0; p < noise.paths; ++p)
      if (res[r].tau_index[p] < res[r - 1].tau_index[p]) {
        c.require(false, "tau not nested at path " + std::to_string(p));
        r = radii.size();
        break;
      }
  const auto rows = nonexplosion_report(coef, noise, radii);
  for (std::size_t r = 1; r < rows.size(); ++r)
    c.require(rows[r].stopped_fraction < rows[r - 1].stopped_fraction,
              "fractions not strictly decreasing at R=" +
                  std::to_string(rows[r].radius));
  c.require(rows.back().stopped_fraction < 0.01,
            "final fraction " + std::to_string(rows.back().stopped_fraction));
}

void criterion_11() {
  Criterion c(11, "continuous dependence");
  const Grid g = make_grid(1.0, 64, GridKind::Uniform);
  const auto noise = sample_wiener(g, 1, 1000, 1111);
  const auto base = linear_coeffs(0.5, 0.4, 1.0);
  std::vector<Coefficients> seq;
  for (std::size_t m : {1, 2, 4, 8, 16, 32}) {
    auto cm = linear_coeffs(0.5, 0.4, 1.0);
    const double bump = 0.5 / static_cast<double>(m);
    cm.B = [bump](double, double, const Vec&) { return Mat{0.4 + bump}; };
    seq.push_back(cm);
  }
  const auto rows = dependence_experiment(seq, base, noise, {}, {0.1});
  for (std::size_t i = 1; i < rows.size(); ++i)
    c.require(rows[i].exceedance[0] <= rows[i - 1].exceedance[0],
              "exceedance not monotone");
  c.require(rows.back().exceedance[0] == 0.0,
            "exceedance at m=32 is " +
                std::to_string(rows.back().exceedance[0]));
}

void criterion_12() {
  Criterion c(12, "schilder rate + small noise");
  const Grid g = make_grid(1.0, 64, GridKind::Uniform);
  Coefficients coef;
  coef.g = [](double) { return Vec{0.0}; };
  coef.B = [](double, double, const Vec&) { return Mat{1.0}; };
  const double y = 1.0;
  const auto est = rate_minimize(coef, g, TerminalTarget{{y}, 0.01}, 4);
  c.require(est.feasible, "rate minimization infeasible");
  const double want = y * y / 2.0;
  c.require(std::fabs(est.I - want) < 0.05 * want,
            "I " + std::to_string(est.I));
  double mean = 0.0, var = 0.0;
  for (double v : est.h_star.hdot) mean += v;
  mean /= static_cast<double>(est.h_star.hdot.size());
  for (double v : est.h_star.hdot) var += (v - mean) * (v - mean);
  var /= static_cast<double>(est.h_star.hdot.size());
  c.require(std::sqrt(var) / std::fabs(mean) < 0.1, "control not constant");

  auto event = [y](const Vec& x) { return x[0] >= y; };
  const auto rows =
      small_noise_estimate(coef, g, {0.5, 0.25, 0.125}, event, 20000, 1212);
  double prev = -1e300;
  for (const auto& row : rows) {
    c.require(!row.skipped, "level skipped");
    if (row.skipped) continue;
    // exact Gaussian P for cross-checking the Monte Carlo estimate
    const double p = 0.5 * std::erfc(y / std::sqrt(2.0 * row.eps));
    const double se = std::sqrt(p * (1.0 - p) / 20000.0);
    c.require(std::fabs(row.p_hat - p) < 4.0 * se, "gaussian cross-check");
    // -I bounds every level from above; levels rise monotonically toward it
    c.require(row.ci_hi < -est.I + 0.02, "level above -I");
    c.require(row.eps_log_p > prev, "levels not monotone toward -I");
    prev = row.eps_log_p;
  }
}

void criterion_13() {
  Criterion c(13, "spectral envelopes + interpolation");
  SpectralModel model{24, 1.0};
  std::vector<double> ts;
  for (int i = 1; i <= 500; ++i) ts.push_back(i * 2e-3);
  const auto rows =
      semigroup_bound_report(model, {0.0, 0.25, 0.5, 0.75, 1.0}, ts);
  for (const auto& row : rows) {
    c.require(row.decay_max <= row.decay_envelope + 1e-9, "decay envelope");
    c.require(row.smooth_max <= row.smooth_envelope + 1e-9, "smooth envelope");
  }
  std::mt19937_64 rng(13);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int trial = 0; trial < 100; ++trial) {
    SpectralState x(8);
    for (auto& v : x) v = u(rng);
    const double alpha = 0.2 + 0.8 * std::fabs(u(rng));
    const double beta = alpha * 0.95 * std::fabs(u(rng));
    const double lhs = frac_norm(model, x, beta);
    const double rhs =
        std::pow(frac_norm(model, x, 0.0), 1.0 - beta / alpha) *
        std::pow(frac_norm(model, x, alpha), beta / alpha);
    if (lhs > rhs * (1.0 + 1e-12)) {
      c.require(false, "interpolation violated");
      break;
    }
  }
}

void criterion_14() {
  Criterion c(14, "strong residual convergence");
  SpectralModel model{4, 1.0};
  NoiseOperator zero;
  zero.K = 4;
  zero.m = 1;
  zero.b.assign(4, 0.0);
  SpectralState x0{1.0, -0.5, 0.3, 0.1};
  double prev = 0.0;
  for (std::size_t N : {64, 128, 256}) {
    const Grid g = make_grid(0.5, N, GridKind::Uniform);
    const auto nz = sample_wiener(g, 1, 1, 14);
    const auto r = mild_solve(model, x0, nullptr, zero, nz, {});
    const double res = strong_residual(model, r, x0, nullptr, zero, nz)[0];
    if (prev > 0.0) {
      const double order = std::log2(prev / res);
      c.require(order > 0.7 && order < 1.3,
                "deterministic order " + std::to_string(order));
    }
    prev = res;
  }

  // stochastic heat with bridge-consistent refinement
  SpectralModel sm{4, 1.0};
  const auto Psi = NoiseOperator::diagonal({1.0, 0.5, 0.25, 0.125});
  SpectralState z0(4, 0.0);
  const std::size_t P = 200;
  auto noise = sample_wiener(make_grid(0.5, 64, GridKind::Uniform), 4, P, 1414);
  std::vector<double> med;
  for (int level = 0; level < 3; ++level) {
    if (level > 0) noise = refine_brownian_bridge(noise, 1414 + level);
    const auto r = mild_solve(sm, z0, nullptr, Psi, noise, {});
    auto res = strong_residual(sm, r, z0, nullptr, Psi, noise);
    std::sort(res.begin(), res.end());
    med.push_back(res[P / 2]);
  }
  const double order =
      0.5 * (std::log2(med[0] / med[1]) + std::log2(med[1] / med[2]));
  c.require(order >= 0.4, "stochastic fitted order " + std::to_string(order));
}

void criterion_15() {
  Criterion c(15, "fbm convolution kernel");
  const Grid g = make_grid(1.0, 64, GridKind::Uniform);
  const double lam = 3.0, psi = 1.0;
  const auto B5 = fbm_convolution_kernel(lam, psi, 0.5, g);
  double dmax = 0.0;
  for (std::size_t i = 1; i <= 64; ++i)
    for (std::size_t j = 0; j < i; ++j)
      dmax = std::max(dmax,
                      std::fabs(B5.at(i, j) -
                                psi * std::exp(-lam * (g.nodes[i] - g.nodes[j]))));
  c.require(dmax < 1e-10, "H=1/2 deviation " + std::to_string(dmax));

  const std::size_t P = 10000;
  const auto w = sample_wiener(g, 1, P, 1515);
  for (double H : {0.3, 0.7}) {
    const auto B = fbm_convolution_kernel(lam, psi, H, g);
    const auto fbm = fbm_from_wiener(w, H);
    double va = 0.0, vb = 0.0;
    for (std::size_t p = 0; p < P; ++p) {
      double a = 0.0, b = 0.0;
      for (std::size_t j = 0; j < 64; ++j) {
        a += B.at(64, j) * w.dW(p, j, 0);
        b += psi * std::exp(-lam * (1.0 - g.nodes[j])) * fbm.dW(p, j, 0);
      }
      va += a * a;
      vb += b * b;
    }
    va /= static_cast<double>(P);
    vb /= static_cast<double>(P);
    const double se = (va + vb) * std::sqrt(2.0 / static_cast<double>(P));
    c.require(std::fabs(va - vb) < 3.0 * se,
              "H=" + std::to_string(H) + " variance gap");
  }
}

void criterion_16() {
  Criterion c(16, "manifest reproducibility");
  namespace fs = std::filesystem;
  const auto base = fs::temp_directory_path() / "vsk_acceptance_16";
  fs::remove_all(base);
  ConfigMap cfg{{"sde.scenario", "linear"}, {"noise.seed", "16"},
                {"noise.paths", "500"},     {"grid.cells", "64"},
                {"grid.horizon", "1.0"}};
  const auto a = run_scenario("sde", cfg, (base / "a").string());
  c.require(a.exit_code == 0, "first run failed");
#ifdef _OPENMP
  omp_set_num_threads(4);
#endif
  const auto b =
      run_from_manifest((base / "a" / "manifest.json").string(),
                        (base / "b").string());
#ifdef _OPENMP
  omp_set_num_threads(1);
#endif
  const auto c2 =
      run_from_manifest((base / "a" / "manifest.json").string(),
                        (base / "c").string());
  c.require(b.exit_code == 0 && c2.exit_code == 0, "manifest re-run failed");
  for (const char* f : {"paths.csv", "moments.csv", "manifest.json"}) {
    const auto ref = slurp((base / "a" / f).string());
    c.require(!ref.empty() && ref == slurp((base / "b" / f).string()) &&
                  ref == slurp((base / "c" / f).string()),
              std::string(f) + " differs");
  }
  fs::remove_all(base);
}

}  // namespace

int main() {
  criterion_1();
  criterion_2();
  criterion_3();
  criterion_4();
  criterion_5();
  criterion_6();
  criterion_7();
  criterion_8();
  criterion_9();
  criterion_10();
  criterion_11();
  criterion_12();
  criterion_13();
  criterion_14();
  criterion_15();
  criterion_16();
  std::printf("%s: %d/16 criteria passed\n",
              g_failures == 0 ? "ACCEPTANCE PASS" : "ACCEPTANCE FAIL",
              16 - g_failures);
  return g_failures == 0 ? 0 : 1;
}
