#include <cstdio>
#include <string>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "CLI11.hpp"
#include "vsk/runner.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Volterra singular-kernel toolkit: kernel classification, "
               "resolvents, stochastic Volterra equations, large deviations, "
               "and spectral SPDE scenarios"};
  app.require_subcommand(0, 1);
  app.fallthrough();

  std::string config_path, out_dir = "out", manifest_path;
  std::int64_t seed = -1;
  int workers = 0;
  app.add_option("--config", config_path, "scenario config file (INI style)");
  app.add_option("--out", out_dir, "output directory for CSVs + manifest");
  app.add_option("--seed", seed, "override noise.seed from the config");
  app.add_option("--workers", workers, "worker thread cap (0 = default)");

  const char* subs[] = {"classify", "resolvent", "volterra", "sde",
                        "ldp",      "spde",      "fbm"};
  const char* descs[] = {
      "kernel class verdict; columns kernel,verdict,shift_limit,base_sup_integral",
      "resolvent kernel table; columns i,j,t_i,t_j,value",
      "deterministic linear solve; columns node,t,value",
      "path ensemble + moments; columns path,node,component,value,tau_index",
      "small-noise estimates; columns epsilon,p_hat,eps_log_p,ci_lo,ci_hi,minus_I",
      "spectral mode paths; columns path,node,mode,value",
      "fractional-noise covariance; columns t_a,t_b,cov,se"};
  for (int i = 0; i < 7; ++i) app.add_subcommand(subs[i], descs[i]);
  auto* rerun = app.add_subcommand(
      "rerun", "reproduce a previous run from its manifest.json");
  rerun->add_option("--manifest", manifest_path, "manifest file")->required();

  CLI11_PARSE(app, argc, argv);

#ifdef _OPENMP
  if (workers > 0) omp_set_num_threads(workers);
#endif

  if (rerun->parsed()) {
    const auto res = vsk::run_from_manifest(manifest_path, out_dir);
    if (res.exit_code != 0) std::fprintf(stderr, "error: %s\n", res.message.c_str());
    return res.exit_code;
  }

  std::string sub;
  for (const auto* s : app.get_subcommands())
    sub = s->get_name();
  if (sub.empty()) {
    std::fprintf(stderr, "error: a subcommand is required (see --help)\n");
    return 2;
  }
  if (config_path.empty()) {
    std::fprintf(stderr, "error: --config is required\n");
    return 2;
  }

  vsk::ConfigMap cfg;
  try {
    cfg = vsk::load_config(config_path);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
  const auto res = vsk::run_scenario(sub, std::move(cfg), out_dir, seed);
  if (res.exit_code != 0)
    std::fprintf(stderr, "error: %s\n", res.message.c_str());
  else
    for (const auto& f : res.files) std::printf("%s\n", f.c_str());
  return res.exit_code;
}
