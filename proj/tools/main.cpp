#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <string>

#include "mtp2/runner.hpp"

namespace {

bool load_config_file(const std::string& path, mtp2::RunConfig& cfg) {
  std::ifstream in(path);
  if (!in) {
    std::cerr << "config error: cannot open " << path << '\n';
    return false;
  }
  try {
    nlohmann::json j;
    in >> j;
    cfg = j.get<mtp2::RunConfig>();
  } catch (const std::exception& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return false;
  }
  return true;
}

}  // namespace

int main(int argc, char** argv) {
  mtp2::RunConfig cfg;

  // A config file provides defaults; explicit flags override it.
  for (int i = 1; i + 1 < argc; ++i)
    if (std::string(argv[i]) == "--config" &&
        !load_config_file(argv[i + 1], cfg))
      return mtp2::kExitConfig;

  CLI::App app{
      "Sparse precision matrix estimation under M-matrix constraints: "
      "multi-stage weighted l1 maximum likelihood via gradient projection"};
  std::string config_path;
  bool corr_on = false, corr_off = false;
  app.add_option("--config", config_path, "JSON config file (same keys as flags)");
  app.add_option("--mode", cfg.mode, "synthetic | estimate | rolling");
  app.add_option("--input", cfg.input, "input CSV");
  app.add_option("--input-type", cfg.input_type,
                 "observations | covariance | prices");
  app.add_option("--labels", cfg.labels, "community labels CSV");
  app.add_option("--constraint", cfg.constraint, "m | ddm");
  app.add_option("--penalty", cfg.penalty, "lasso | scad | mcp");
  app.add_option("--lambda", cfg.lambda, "regularization value (>= 0)");
  app.add_option("--lambda-grid", cfg.lambda_grid,
                 "lo:hi:count, log-spaced sweep grid");
  app.add_option("--stages", cfg.stages, "reweighting stages (K)");
  app.add_option("--rel-tol", cfg.rel_tol, "solver stopping tolerance");
  app.add_option("--max-iter", cfg.max_iter, "solver iteration cap");
  app.add_option("--dykstra-eps", cfg.dykstra_eps,
                 "alternating projection tolerance");
  app.add_option("--edge-threshold", cfg.edge_threshold,
                 "|entry| above which an edge is reported");
  app.add_option("--objective", cfg.objective, "gaussian | t:<nu>");
  app.add_flag("--center", cfg.center, "subtract column means");
  app.add_flag("--correlation", corr_on,
               "estimate on the sample correlation matrix");
  app.add_flag("--no-correlation", corr_off,
               "force raw covariance even in rolling mode");
  app.add_option("--window", cfg.window, "rolling window length");
  app.add_option("--shift", cfg.shift, "rolling window shift");
  app.add_option("--seed", cfg.seed, "base RNG seed");
  app.add_option("--replications", cfg.replications,
                 "synthetic replications (seeds seed, seed+1, ...)");
  app.add_option("--graph", cfg.graph, "grid | line | ba | sbm");
  app.add_option("--p", cfg.p, "synthetic node count");
  app.add_option("--n", cfg.n, "synthetic sample size");
  app.add_option("--scad-a", cfg.scad_a, "scad shape (a > 2)");
  app.add_option("--mcp-gamma", cfg.mcp_gamma, "mcp shape (gamma > 1)");
  app.add_option("--threads", cfg.threads, "sweep worker threads (0 = auto)");
  app.add_option("--out", cfg.out, "output directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return mtp2::kExitConfig;
  }
  if (corr_on && corr_off) {
    std::cerr << "config error: --correlation conflicts with "
                 "--no-correlation\n";
    return mtp2::kExitConfig;
  }
  if (corr_on) cfg.correlation = 1;
  if (corr_off) cfg.correlation = 0;

  return mtp2::run(cfg);
}
