#include "vsk/runner.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <memory>
#include <sstream>
#include <stdexcept>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "json.hpp"
#include "vsk/ldp.hpp"
#include "vsk/resolvent.hpp"
#include "vsk/sde.hpp"
#include "vsk/spectral.hpp"

namespace vsk {

namespace {

constexpr const char* kSchemaVersion = "1";

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

class Csv {
 public:
  Csv(const std::string& path, const std::string& columns) : out_(path) {
    if (!out_) throw std::runtime_error("cannot write " + path);
    out_ << "# vsk csv v" << kSchemaVersion << "\n" << columns << "\n";
  }
  template <typename... T>
  void row(const T&... cells) {
    bool first = true;
    ((out_ << (first ? "" : ","), first = false, put(cells)), ...);
    out_ << "\n";
  }

 private:
  void put(double v) { out_ << fmt(v); }
  void put(std::size_t v) { out_ << v; }
  void put(int v) { out_ << v; }
  void put(const std::string& s) { out_ << s; }
  void put(const char* s) { out_ << s; }
  std::ofstream out_;
};

Grid grid_from(const ConfigMap& cfg) {
  const double T = cfg_num(cfg, "grid.horizon", 1.0);
  const std::size_t N = static_cast<std::size_t>(cfg_int(cfg, "grid.cells", 128));
  const std::string kind = cfg_str(cfg, "grid.kind", "uniform");
  if (kind == "uniform") return make_grid(T, N, GridKind::Uniform);
  if (kind == "graded")
    return make_grid(T, N, GridKind::Graded, cfg_num(cfg, "grid.exponent", 2.0));
  throw std::invalid_argument("config: unknown grid.kind '" + kind + "'");
}

Kernel kernel_from(const ConfigMap& cfg) {
  const std::string label = cfg_str(cfg, "kernel.label");
  if (label == "constant") return constant_kernel(cfg_num(cfg, "kernel.c", 1.0));
  if (label == "separable-exp")
    return separable_kernel(
        exp_profile(cfg_num(cfg, "kernel.c", 1.0), cfg_num(cfg, "kernel.rate", 1.0)));
  if (label == "convolution-exp")
    return convolution_kernel(
        exp_profile(cfg_num(cfg, "kernel.c", 1.0), cfg_num(cfg, "kernel.rate", 1.0)));
  if (label == "convolution-frac")
    return convolution_kernel(frac_profile(cfg_num(cfg, "kernel.alpha", 0.5)));
  if (label == "power")
    return power_kernel(cfg_num(cfg, "kernel.c", 1.0),
                        cfg_num(cfg, "kernel.alpha", 0.3),
                        cfg_num(cfg, "kernel.beta", 0.2));
  if (label == "circle") return circle_kernel(cfg_num(cfg, "kernel.c", 0.5));
  if (label == "semigroup")
    return semigroup_kernel(cfg_num(cfg, "kernel.c", 1.0),
                            cfg_num(cfg, "kernel.alpha", 0.5),
                            cfg_num(cfg, "kernel.delta", 1.0));
  if (label == "loglog") return loglog_kernel(cfg_num(cfg, "kernel.delta", 1.0));
  if (label == "fbm") return fbm_kernel(cfg_num(cfg, "kernel.hurst", 0.7));
  throw std::invalid_argument("config: unknown kernel.label '" + label + "'");
}

NoiseEnsemble noise_from(const ConfigMap& cfg, const Grid& grid) {
  if (!cfg.count("noise.seed"))
    throw std::invalid_argument("config: noise.seed is mandatory");
  const auto seed = static_cast<std::uint64_t>(cfg_int(cfg, "noise.seed", 0));
  const auto paths =
      static_cast<std::size_t>(cfg_int(cfg, "noise.paths", 1000));
  const auto dims = static_cast<std::size_t>(cfg_int(cfg, "noise.dims", 1));
  auto w = sample_wiener(grid, dims, paths, seed);
  if (cfg.count("noise.hurst"))
    return fbm_from_wiener(w, cfg_num(cfg, "noise.hurst"));
  return w;
}

// registered coefficient sets for the sde subcommand
Coefficients coefficients_from(const ConfigMap& cfg) {
  const std::string name = cfg_str(cfg, "sde.scenario", "linear");
  const double sigma = cfg_num(cfg, "sde.sigma", 0.3);
  const double x0 = cfg_num(cfg, "sde.x0", 1.0);
  Coefficients c;
  if (name == "linear") {
    const double kap = cfg_num(cfg, "sde.kappa", 0.5);
    c.g = [x0](double) { return Vec{x0}; };
    auto ker = std::make_shared<Kernel>(constant_kernel(kap));
    c.kappa_A = ker;
    c.a = [](double, const Vec& x) { return Vec{x[0]}; };
    c.A = [kap](double, double, const Vec& x) { return Vec{kap * x[0]}; };
    c.B = [sigma](double, double, const Vec&) { return Mat{sigma}; };
    c.kappa1 = ker;
    return c;
  }
  if (name == "ou") {
    const double lam = cfg_num(cfg, "sde.lambda", 1.0);
    c.g = [x0, lam](double t) { return Vec{x0 * std::exp(-lam * t)}; };
    c.B = [sigma, lam](double t, double s, const Vec&) {
      return Mat{sigma * std::exp(-lam * (t - s))};
    };
    return c;
  }
  if (name == "lipschitz") {
    c.g = [x0](double) { return Vec{x0}; };
    c.A = [](double, double, const Vec& x) { return Vec{0.4 * std::cos(x[0])}; };
    c.B = [sigma](double, double, const Vec& x) {
      return Mat{sigma / (1.0 + x[0] * x[0])};
    };
    return c;
  }
  if (name == "additive") {
    c.g = [x0](double) { return Vec{x0}; };
    c.B = [sigma](double, double, const Vec&) { return Mat{sigma}; };
    return c;
  }
  throw std::invalid_argument("config: unknown sde.scenario '" + name + "'");
}

SolveConfig solve_config_from(const ConfigMap& cfg) {
  SolveConfig sc;
  sc.stop_radius = cfg_num(cfg, "sde.stop_radius",
                           std::numeric_limits<double>::infinity());
  sc.start_index =
      static_cast<std::size_t>(cfg_int(cfg, "sde.start_index", 0));
  if (cfg_str(cfg, "sde.scheme", "euler") == "picard")
    sc.scheme = Scheme::Picard;
  return sc;
}

void write_tritable(const TriTable& t, const std::string& path) {
  Csv csv(path, "i,j,t_i,t_j,value");
  for (std::size_t i = 0; i < t.rows(); ++i)
    for (std::size_t j = 0; j <= i; ++j)
      csv.row(i, j, t.grid.nodes[i], t.grid.nodes[j], t.at(i, j));
}

void write_manifest(const std::string& subcommand, const ConfigMap& cfg,
                    const std::string& out_dir,
                    const std::vector<std::string>& files) {
  nlohmann::json m;
  m["tool"] = "vsk";
  m["schema"] = kSchemaVersion;
  m["subcommand"] = subcommand;
  m["config_hash"] = fmt(static_cast<double>(config_hash(cfg)));
  nlohmann::json jc;
  for (const auto& [k, v] : cfg) jc[k] = v;
  m["config"] = jc;
  nlohmann::json names = nlohmann::json::array();
  for (const auto& f : files)
    names.push_back(std::filesystem::path(f).filename().string());
  m["outputs"] = names;
  std::ofstream out(out_dir + "/manifest.json");
  out << m.dump(2) << "\n";
}

RunResult run_impl(const std::string& sub, const ConfigMap& cfg,
                   const std::string& out_dir) {
  std::filesystem::create_directories(out_dir);
  RunResult res;
  auto emit = [&](const std::string& name) {
    res.files.push_back(out_dir + "/" + name);
    return res.files.back();
  };

  if (sub == "classify") {
    const Kernel k = kernel_from(cfg);
    const auto rep = classify(k, cfg_num(cfg, "grid.horizon", 1.0));
    Csv csv(emit("classify.csv"),
            "kernel,verdict,shift_limit,base_sup_integral");
    csv.row(k.label, to_string(rep.verdict), rep.shift_limit,
            rep.base_sup_integral);
    Csv beta(emit("classify_beta.csv"), "beta,sup_integral");
    for (const auto& [b, v] : rep.beta_sup) beta.row(b, v);
  } else if (sub == "resolvent") {
    const Grid g = grid_from(cfg);
    const auto R = resolvent_sum(kernel_from(cfg), g);
    write_tritable(R.table, emit("resolvent.csv"));
  } else if (sub == "volterra") {
    const Grid g = grid_from(cfg);
    const double g0 = cfg_num(cfg, "volterra.forcing", 1.0);
    const std::vector<double> f(g.nodes.size(), g0);
    const auto x = linear_volterra_solve(f, kernel_from(cfg), g);
    Csv csv(emit("volterra.csv"), "node,t,value");
    for (std::size_t i = 0; i < x.size(); ++i) csv.row(i, g.nodes[i], x[i]);
  } else if (sub == "sde") {
    const Grid g = grid_from(cfg);
    const auto noise = noise_from(cfg, g);
    const auto c = coefficients_from(cfg);
    const auto sc = solve_config_from(cfg);
    const auto r = sc.scheme == Scheme::Picard ? picard_solve(c, noise, sc)
                                               : euler_solve(c, noise, sc);
    const std::size_t keep = std::min<std::size_t>(noise.paths, 64);
    Csv csv(emit("paths.csv"), "path,node,component,value,tau_index");
    for (std::size_t p = 0; p < keep; ++p)
      for (std::size_t i = r.start_index; i <= g.cells(); ++i)
        for (std::size_t k = 0; k < r.d; ++k)
          csv.row(p, i, k, r.at(p, i, k), r.tau_index[p]);
    const auto mom = moment_report(r, c, {2.0});
    Csv mcsv(emit("moments.csv"), "node,t,mean_sq,se,omitted");
    for (std::size_t i = 0; i <= g.cells(); ++i)
      mcsv.row(i, g.nodes[i], mom.moment[0][i], mom.se[0][i],
               static_cast<int>(mom.omitted[i]));
  } else if (sub == "ldp") {
    const Grid g = grid_from(cfg);
    const auto c = coefficients_from(cfg);
    const double y = cfg_num(cfg, "ldp.target", 1.0);
    const double tol = cfg_num(cfg, "ldp.tolerance", 0.05);
    const auto M =
        static_cast<std::size_t>(cfg_int(cfg, "ldp.control_cells", 4));
    const auto est = rate_minimize(c, g, TerminalTarget{{y}, tol}, M);
    const auto eps_list = cfg_list(cfg, "ldp.eps_list", {0.5, 0.25, 0.125});
    const auto P = static_cast<std::size_t>(cfg_int(cfg, "noise.paths", 5000));
    if (!cfg.count("noise.seed"))
      throw std::invalid_argument("config: noise.seed is mandatory");
    const auto seed = static_cast<std::uint64_t>(cfg_int(cfg, "noise.seed", 0));
    auto event = [y, tol](const Vec& x) { return std::fabs(x[0] - y) <= tol; };
    const auto rows = small_noise_estimate(c, g, eps_list, event, P, seed);
    Csv csv(emit("ldp.csv"), "epsilon,p_hat,eps_log_p,ci_lo,ci_hi,minus_I");
    for (const auto& row : rows) {
      if (row.skipped) continue;
      csv.row(row.eps, row.p_hat, row.eps_log_p, row.ci_lo, row.ci_hi,
              est.feasible ? -est.I : -std::numeric_limits<double>::infinity());
    }
  } else if (sub == "spde") {
    const Grid g = grid_from(cfg);
    SpectralModel model;
    model.K = static_cast<std::size_t>(cfg_int(cfg, "spde.modes", 8));
    model.mu = cfg_num(cfg, "spde.mu", 1.0);
    std::vector<double> sig(model.K);
    const double s0 = cfg_num(cfg, "spde.sigma", 1.0);
    for (std::size_t k = 0; k < model.K; ++k)
      sig[k] = s0 / static_cast<double>((k + 1) * (k + 1));
    ConfigMap ncfg = cfg;
    ncfg["noise.dims"] = std::to_string(model.K);
    const auto noise = noise_from(ncfg, g);
    SpectralState x0(model.K, 0.0);
    x0[0] = cfg_num(cfg, "spde.x0", 1.0);
    const double amp = cfg_num(cfg, "spde.phi_amplitude", 0.0);
    std::function<double(double)> phi;
    if (amp != 0.0) phi = [amp](double u) { return amp * std::sin(u); };
    SolveConfig sc;
    sc.stop_radius = cfg_num(cfg, "spde.stop_radius", 50.0);
    const auto r =
        mild_solve(model, x0, phi, NoiseOperator::diagonal(sig), noise, sc);
    const std::size_t keep = std::min<std::size_t>(noise.paths, 32);
    Csv csv(emit("modes.csv"), "path,node,mode,value");
    for (std::size_t p = 0; p < keep; ++p)
      for (std::size_t i = 0; i <= g.cells(); ++i)
        for (std::size_t k = 0; k < model.K; ++k)
          csv.row(p, i, k + 1, r.at(p, i, k));
  } else if (sub == "fbm") {
    const Grid g = grid_from(cfg);
    ConfigMap ncfg = cfg;
    if (!ncfg.count("noise.hurst")) ncfg["noise.hurst"] = "0.7";
    const auto e = noise_from(ncfg, g);
    std::vector<std::size_t> nodes;
    const std::size_t N = g.cells();
    for (std::size_t i = N / 4; i <= N; i += N / 4) nodes.push_back(i);
    const auto cov = empirical_covariance(e, nodes);
    Csv csv(emit("fbm_cov.csv"), "t_a,t_b,cov,se");
    for (std::size_t a = 0; a < nodes.size(); ++a)
      for (std::size_t b = 0; b <= a; ++b)
        csv.row(g.nodes[nodes[a]], g.nodes[nodes[b]], cov.cov[a][b],
                cov.se[a][b]);
  } else {
    throw std::invalid_argument("unknown subcommand '" + sub + "'");
  }

  write_manifest(sub, cfg, out_dir, res.files);
  res.files.push_back(out_dir + "/manifest.json");
  res.message = "ok";
  return res;
}

}  // namespace

RunResult run_scenario(const std::string& subcommand, ConfigMap cfg,
                       const std::string& out_dir,
                       std::int64_t seed_override) {
  if (seed_override >= 0)
    cfg["noise.seed"] = std::to_string(seed_override);
  try {
    return run_impl(subcommand, cfg, out_dir);
  } catch (const std::invalid_argument& e) {
    return {2, {}, e.what()};
  } catch (const std::logic_error& e) {
    return {2, {}, e.what()};
  } catch (const std::exception& e) {
    return {3, {}, e.what()};
  }
}

RunResult run_from_manifest(const std::string& manifest_path,
                            const std::string& out_dir) {
  nlohmann::json m;
  try {
    std::ifstream in(manifest_path);
    if (!in) throw std::invalid_argument("cannot open " + manifest_path);
    in >> m;
  } catch (const std::exception& e) {
    return {2, {}, e.what()};
  }
  ConfigMap cfg;
  for (const auto& [k, v] : m["config"].items())
    cfg[k] = v.get<std::string>();
  return run_scenario(m["subcommand"].get<std::string>(), cfg, out_dir);
}

}  // namespace vsk
