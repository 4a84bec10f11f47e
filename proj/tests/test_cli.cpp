#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "mtp2/runner.hpp"
#include "oracles.hpp"

using Eigen::MatrixXd;
using namespace mtp2;
namespace fs = std::filesystem;

namespace {

std::string scratch_dir(const std::string& tag) {
  fs::path dir = fs::temp_directory_path() / ("mtp2_test_" + tag);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir.string();
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in.good());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

}  // namespace

TEST_CASE("log_returns formula and error reporting") {
  MatrixXd prices(2, 2);
  prices << 100, 10, 110, 11;
  MatrixXd r = log_returns(prices);
  REQUIRE(r.rows() == 1);
  CHECK(r(0, 0) == doctest::Approx(std::log(1.1)).epsilon(1e-14));
  CHECK(r(0, 1) == doctest::Approx(std::log(1.1)).epsilon(1e-14));

  MatrixXd flat = MatrixXd::Constant(5, 3, 42.0);
  CHECK(log_returns(flat).cwiseAbs().maxCoeff() == 0);

  MatrixXd bad = flat;
  bad(2, 1) = 0;
  try {
    (void)log_returns(bad);
    FAIL("expected an exception");
  } catch (const std::invalid_argument& e) {
    CHECK(std::string(e.what()).find("row 3") != std::string::npos);
    CHECK(std::string(e.what()).find("column 2") != std::string::npos);
  }
}

TEST_CASE("rolling window arithmetic") {
  auto w = rolling_windows(630, RollingSpec{504, 63});
  REQUIRE(w.size() == 3);
  CHECK(w[0] == std::pair<long, long>{0, 504});
  CHECK(w[1] == std::pair<long, long>{63, 567});
  CHECK(w[2] == std::pair<long, long>{126, 630});
  CHECK(rolling_windows(504, RollingSpec{504, 63}).size() == 1);
  CHECK_THROWS_AS((void)rolling_windows(503, RollingSpec{504, 63}),
                  std::invalid_argument);
  CHECK_THROWS_AS((void)rolling_windows(600, RollingSpec{100, 101}),
                  std::invalid_argument);
}

TEST_CASE("matrix csv round trip is bit exact") {
  Rng rng(301);
  std::string dir = scratch_dir("roundtrip");
  MatrixXd m = oracle::random_matrix(rng, 7, 7, 3.0);
  m(0, 0) = 1e-300;  // denormal-adjacent values survive too
  m(1, 1) = -0.1;
  write_matrix_csv(dir + "/m.csv", m);
  MatrixXd back = read_matrix_csv(dir + "/m.csv");
  REQUIRE(back.rows() == 7);
  for (int i = 0; i < 7; ++i)
    for (int j = 0; j < 7; ++j) CHECK(back(i, j) == m(i, j));
}

TEST_CASE("csv reader handles headers and date columns") {
  std::string dir = scratch_dir("csvread");
  {
    std::ofstream out(dir + "/data.csv");
    out << "a,b\n1.5,2\n3,4\n";
  }
  MatrixXd m = read_matrix_csv(dir + "/data.csv");
  REQUIRE(m.rows() == 2);
  CHECK(m(0, 0) == 1.5);

  {
    std::ofstream out(dir + "/prices.csv");
    out << "date,AAA,BBB\n2020-01-01,10,20\n2020-01-02,11,21\n";
  }
  MatrixXd p = read_matrix_csv(dir + "/prices.csv", true);
  REQUIRE(p.rows() == 2);
  REQUIRE(p.cols() == 2);
  CHECK(p(1, 1) == 21);

  {
    std::ofstream out(dir + "/ragged.csv");
    out << "1,2\n3\n";
  }
  CHECK_THROWS_AS((void)read_matrix_csv(dir + "/ragged.csv"),
                  std::runtime_error);
}

TEST_CASE("edge lists are one-based i,j,weight rows") {
  std::string dir = scratch_dir("edges");
  MatrixXd theta = MatrixXd::Identity(3, 3);
  theta(0, 2) = theta(2, 0) = -0.25;
  write_edge_list(dir + "/edges.csv", theta, 1e-5);
  std::string text = slurp(dir + "/edges.csv");
  CHECK(text == "i,j,weight\n1,3,-0.25\n");
}

TEST_CASE("config validation failures exit with code 2") {
  RunConfig bad_mode;
  bad_mode.mode = "frobnicate";
  bad_mode.lambda = 0.1;
  CHECK(run(bad_mode) == kExitConfig);

  RunConfig no_input;
  no_input.mode = "estimate";
  no_input.lambda = 0.1;
  CHECK(run(no_input) == kExitConfig);

  RunConfig no_lambda;
  no_lambda.mode = "synthetic";
  CHECK(run(no_lambda) == kExitConfig);

  RunConfig bad_grid;
  bad_grid.mode = "synthetic";
  bad_grid.lambda_grid = "nonsense";
  CHECK(run(bad_grid) == kExitConfig);

  RunConfig no_labels;
  no_labels.mode = "rolling";
  no_labels.input = "whatever.csv";
  no_labels.lambda = 0.1;
  CHECK(run(no_labels) == kExitConfig);

  RunConfig t_on_cov;
  t_on_cov.mode = "estimate";
  t_on_cov.input = "x.csv";
  t_on_cov.input_type = "covariance";
  t_on_cov.objective = "t:4";
  t_on_cov.lambda = 0.1;
  CHECK(run(t_on_cov) == kExitConfig);
}

TEST_CASE("ingestion failures exit with code 3") {
  std::string dir = scratch_dir("ingest");
  RunConfig missing;
  missing.mode = "estimate";
  missing.input = dir + "/absent.csv";
  missing.lambda = 0.1;
  missing.out = dir + "/out";
  CHECK(run(missing) == kExitIngest);

  {
    std::ofstream out(dir + "/asym.csv");
    out << "1,0.5\n0.4,1\n";
  }
  RunConfig asym;
  asym.mode = "estimate";
  asym.input = dir + "/asym.csv";
  asym.input_type = "covariance";
  asym.lambda = 0.1;
  asym.out = dir + "/out";
  CHECK(run(asym) == kExitIngest);

  {
    std::ofstream out(dir + "/badprice.csv");
    out << "10,20\n0,21\n11,22\n";
  }
  RunConfig price;
  price.mode = "estimate";
  price.input = dir + "/badprice.csv";
  price.input_type = "prices";
  price.lambda = 0.1;
  price.out = dir + "/out";
  CHECK(run(price) == kExitIngest);
}

TEST_CASE("estimate mode recovers the 2x2 closed form") {
  std::string dir = scratch_dir("closedform");
  {
    std::ofstream out(dir + "/cov.csv");
    out << "1,0.5\n0.5,1\n";
  }
  RunConfig cfg;
  cfg.mode = "estimate";
  cfg.input = dir + "/cov.csv";
  cfg.input_type = "covariance";
  cfg.penalty = "lasso";
  cfg.lambda = 0.0;
  cfg.stages = 1;
  cfg.out = dir + "/out";
  REQUIRE(run(cfg) == kExitOk);
  MatrixXd theta = read_matrix_csv(dir + "/out/precision.csv");
  // Armijo acceptance cannot certify objective decreases below one ulp of
  // f, which pins the attainable distance near 3e-8 on this instance.
  CHECK(std::abs(theta(0, 0) - 4.0 / 3) <= 2e-7);
  CHECK(std::abs(theta(0, 1) + 2.0 / 3) <= 2e-7);
  CHECK(fs::exists(dir + "/out/edges.csv"));
  CHECK(fs::exists(dir + "/out/report.json"));
}

TEST_CASE("estimate mode on zero-mean data equals the library path") {
  std::string dir = scratch_dir("library_equal");
  GraphSpec spec;
  spec.family = GraphFamily::Line;
  spec.p = 6;
  spec.seed = 71;
  GroundTruth gt = build_precision_m(generate_adjacency(spec));
  MatrixXd x = sample_gaussian(gt, 80, 72);
  write_matrix_csv(dir + "/obs.csv", x);

  RunConfig cfg;
  cfg.mode = "estimate";
  cfg.input = dir + "/obs.csv";
  cfg.penalty = "scad";
  cfg.lambda = 0.2;
  cfg.stages = 2;
  cfg.center = false;
  cfg.correlation = 0;
  cfg.out = dir + "/out";
  REQUIRE(run(cfg) == kExitOk);
  MatrixXd from_cli = read_matrix_csv(dir + "/out/precision.csv");

  AdaptiveConfig<double> a;
  a.stages = 2;
  a.updater = WeightUpdater<double>::scad(0.2);
  auto reports = estimate(sample_covariance(x), a);
  const MatrixXd& direct = reports.back().estimate.theta;
  REQUIRE(from_cli.rows() == direct.rows());
  for (int i = 0; i < direct.rows(); ++i)
    for (int j = 0; j < direct.cols(); ++j)
      CHECK(from_cli(i, j) == direct(i, j));
}

TEST_CASE("synthetic mode is byte deterministic and self-reproducing") {
  std::string dir = scratch_dir("determinism");
  RunConfig cfg;
  cfg.mode = "synthetic";
  cfg.graph = "line";
  cfg.p = 20;
  cfg.n = 40;
  cfg.seed = 9001;
  cfg.penalty = "scad";
  cfg.lambda = 0.15;
  cfg.stages = 2;
  cfg.rel_tol = 1e-9;
  cfg.out = dir + "/out";
  REQUIRE(run(cfg) == kExitOk);
  std::string first = slurp(dir + "/out/metrics.json");

  REQUIRE(run(cfg) == kExitOk);
  CHECK(slurp(dir + "/out/metrics.json") == first);

  // round-trip through the embedded config
  nlohmann::json j = nlohmann::json::parse(first);
  RunConfig rebuilt = j.at("config").get<RunConfig>();
  REQUIRE(run(rebuilt) == kExitOk);
  CHECK(slurp(dir + "/out/metrics.json") == first);
  CHECK(fs::exists(dir + "/out/theta_star.csv"));
  CHECK(fs::exists(dir + "/out/ground_truth.json"));
  CHECK(fs::exists(dir + "/out/theta_hat.csv"));
}

TEST_CASE("synthetic sweep writes the pinned csv surface") {
  std::string dir = scratch_dir("sweep");
  RunConfig cfg;
  cfg.mode = "synthetic";
  cfg.graph = "line";
  cfg.p = 10;
  cfg.n = 30;
  cfg.seed = 11;
  cfg.penalty = "lasso";
  cfg.lambda_grid = "0.05:0.5:3";
  cfg.stages = 1;
  cfg.rel_tol = 1e-8;
  cfg.replications = 2;
  cfg.out = dir + "/out";
  REQUIRE(run(cfg) == kExitOk);
  std::string sweep = slurp(dir + "/out/sweep.csv");
  CHECK(sweep.rfind("lambda,seed,error,tpr,fpr,fscore,iterations,"
                    "kkt_residual,converged\n",
                    0) == 0);
  // 3 grid points x 2 replications data rows + header
  CHECK(std::count(sweep.begin(), sweep.end(), '\n') == 7);
  CHECK(fs::exists(dir + "/out/sweep_stages.csv"));
  CHECK(fs::exists(dir + "/out/sweep_summary.csv"));
}

TEST_CASE("rolling mode emits one table row per window") {
  std::string dir = scratch_dir("rolling");
  // prices built from a known ground truth so the graph is recoverable
  GraphSpec spec;
  spec.family = GraphFamily::StochasticBlock;
  spec.p = 12;
  spec.sbm_blocks = 3;
  spec.sbm_within = 0.6;
  spec.sbm_between = 0.02;
  spec.seed = 31;
  GroundTruth gt = build_precision_ddm(generate_adjacency(spec), 32);
  MatrixXd r = sample_gaussian(gt, 90, 33) * 0.01;
  MatrixXd prices(91, 12);
  prices.row(0).setConstant(100.0);
  for (int t = 0; t < 90; ++t)
    prices.row(t + 1) =
        prices.row(t).cwiseProduct(r.row(t).array().exp().matrix());
  write_matrix_csv(dir + "/prices.csv", prices);
  {
    std::ofstream out(dir + "/labels.csv");
    for (int i = 0; i < 12; ++i) out << "sector" << (i / 4) << "\n";
  }

  RunConfig cfg;
  cfg.mode = "rolling";
  cfg.input = dir + "/prices.csv";
  cfg.input_type = "prices";
  cfg.labels = dir + "/labels.csv";
  cfg.constraint = "ddm";
  cfg.penalty = "lasso";
  cfg.lambda_grid = "0.05:0.4:3";
  cfg.stages = 1;
  cfg.window = 60;
  cfg.shift = 15;
  cfg.rel_tol = 1e-8;
  cfg.out = dir + "/out";
  int code = run(cfg);
  REQUIRE((code == kExitOk || code == kExitNoConvergence));
  std::string table = slurp(dir + "/out/rolling.csv");
  // (90 - 60) / 15 + 1 = 3 windows
  CHECK(std::count(table.begin(), table.end(), '\n') == 4);
  CHECK(fs::exists(dir + "/out/rolling_detail.csv"));
  CHECK(fs::exists(dir + "/out/index.json"));
}

TEST_CASE("non-convergence still writes artifacts and exits 4") {
  std::string dir = scratch_dir("noconv");
  GraphSpec spec;
  spec.family = GraphFamily::Line;
  spec.p = 8;
  spec.seed = 41;
  GroundTruth gt = build_precision_m(generate_adjacency(spec));
  write_matrix_csv(dir + "/obs.csv", sample_gaussian(gt, 50, 42));

  RunConfig cfg;
  cfg.mode = "estimate";
  cfg.input = dir + "/obs.csv";
  cfg.penalty = "lasso";
  cfg.lambda = 0.1;
  cfg.stages = 1;
  cfg.max_iter = 2;  // cannot converge
  cfg.out = dir + "/out";
  CHECK(run(cfg) == kExitNoConvergence);
  CHECK(fs::exists(dir + "/out/precision.csv"));
  nlohmann::json report =
      nlohmann::json::parse(slurp(dir + "/out/report.json"));
  CHECK(report.at("converged") == false);
}
