#pragma once

#include <cstdint>
#include <functional>
#include <limits>
#include <memory>
#include <vector>

#include "vsk/grid.hpp"
#include "vsk/kernel.hpp"
#include "vsk/noise.hpp"

namespace vsk {

using Vec = std::vector<double>;
using Mat = std::vector<double>;  // row-major d x m

// Coefficients of X(t) = g(t) + int_0^t A(t,s,X(s))ds + int_0^t B(t,s,X(s))dW(s).
// A null A or B means identically zero.  When a coefficient factors as
// kernel(t,s) * state-part(s,x), declare the factorization: the drift then
// integrates the kernel exactly over each cell instead of using a left-point
// rule, which is what keeps singular kernels first-order accurate.
struct Coefficients {
  std::size_t d = 1;
  std::size_t m = 1;
  std::function<Vec(double)> g;
  std::function<Vec(double t, double s, const Vec& x)> A;
  std::function<Mat(double t, double s, const Vec& x)> B;

  // separable drift: A(t,s,x) = kappa_A(t,s) * a(s,x)
  std::shared_ptr<const Kernel> kappa_A;
  std::function<Vec(double s, const Vec& x)> a;
  // separable diffusion: B(t,s,x) = kappa_B(t,s) * b(s,x)
  std::shared_ptr<const Kernel> kappa_B;
  std::function<Mat(double s, const Vec& x)> b;

  // linear-growth dominating kernels, when known
  std::shared_ptr<const Kernel> kappa1;  // drift growth
  std::shared_ptr<const Kernel> kappa2;  // diffusion growth
};

// Spot-checks declared factorizations against direct evaluation on random
// points; throws std::logic_error beyond relative 1e-8.
void verify_separable(const Coefficients& c, const Grid& grid,
                      std::uint64_t seed = 1);

enum class Scheme { Euler, Picard };

struct SolveConfig {
  Scheme scheme = Scheme::Euler;
  std::size_t picard_iters = 60;
  double picard_tol = 1e-10;
  double stop_radius = std::numeric_limits<double>::infinity();
  std::size_t start_index = 0;  // 1 when g blows up at t=0
};

struct PathResult {
  Grid grid;
  std::size_t d = 1;
  std::size_t paths = 0;
  std::size_t start_index = 0;
  // X[p][i*d + c] at node i = 0..N; frozen at the exit value past tau_index
  std::vector<std::vector<double>> X;
  std::vector<std::size_t> tau_index;  // first node index with |X| > R, else N+1
  std::vector<char> exploded;

  double at(std::size_t p, std::size_t i, std::size_t c = 0) const {
    return X[p][i * d + c];
  }
  double norm_at(std::size_t p, std::size_t i) const;
};

PathResult euler_solve(const Coefficients& c, const NoiseEnsemble& noise,
                       const SolveConfig& cfg);

struct PicardReport {
  std::vector<double> sweep_distance;  // sup-node, max-path change per sweep
  bool converged = false;
};

// Same-noise Picard sweeps from X = g; throws ConvergenceError (with the
// distance history attached) if the sweeps don't contract within the budget.
PathResult picard_solve(const Coefficients& c, const NoiseEnsemble& noise,
                        const SolveConfig& cfg, PicardReport* report = nullptr);

// Piecewise-constant control: hdot[j*dims + k] on cell j.
struct Control {
  Grid grid;
  std::size_t dims = 1;
  std::vector<double> hdot;

  double norm_sq() const {
    double s = 0.0;
    for (std::size_t j = 0; j < grid.cells(); ++j) {
      double c = 0.0;
      for (std::size_t k = 0; k < dims; ++k) {
        const double v = hdot[j * dims + k];
        c += v * v;
      }
      s += c * grid.width(j);
    }
    return s;
  }
};

Control zero_control(const Grid& grid, std::size_t dims);

// Euler recursion plus the control term sum_j B(t_i,t_j,X_j) hdot_j dt_j, with
// the stochastic term scaled by sqrt(eps).  noise may be null when eps = 0.
PathResult controlled_solve(const Coefficients& c, const Control& h,
                            const NoiseEnsemble* noise, double eps,
                            const SolveConfig& cfg);

struct MomentReport {
  std::vector<double> p_list;
  std::vector<std::vector<double>> moment;  // [pi][node]
  std::vector<std::vector<double>> se;
  std::vector<char> omitted;     // per node: too few surviving paths
  std::vector<double> bound;     // Gronwall-chain envelope (empty without kappa1)
  bool bounded = true;
};

MomentReport moment_report(const PathResult& r, const Coefficients& c,
                           const std::vector<double>& p_list);

struct HolderReport {
  double exponent = 0.0;
  double ci_halfwidth = 0.0;
  std::vector<double> lags;
  std::vector<double> mean_pow;  // E||X(t+delta)-X(t)||^p per lag
};

HolderReport holder_report(const PathResult& r, double p = 2.0,
                           std::size_t max_level = 5);

struct DependenceRow {
  std::size_t m = 0;
  std::vector<double> exceedance;  // per eps level
};

std::vector<DependenceRow> dependence_experiment(
    const std::vector<Coefficients>& c_seq, const Coefficients& c,
    const NoiseEnsemble& noise, const SolveConfig& cfg,
    const std::vector<double>& eps_levels);

struct NonexplosionRow {
  double radius = 0.0;
  double stopped_fraction = 0.0;
};

std::vector<NonexplosionRow> nonexplosion_report(const Coefficients& c,
                                                 const NoiseEnsemble& noise,
                                                 const std::vector<double>& radii,
                                                 const SolveConfig& cfg = {});

}  // namespace vsk
