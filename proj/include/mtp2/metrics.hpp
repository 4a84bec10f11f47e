#pragma once

#include <Eigen/Core>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <future>
#include <limits>
#include <stdexcept>
#include <thread>
#include <utility>
#include <vector>

#include "mtp2/adaptive.hpp"
#include "mtp2/synthetic.hpp"

namespace mtp2 {

/// Relative Frobenius error ||theta_hat - theta_star|| / ||theta_star||.
inline double estimation_error(const Eigen::MatrixXd& theta_hat,
                               const Eigen::MatrixXd& theta_star) {
  double denom = theta_star.norm();
  if (denom == 0)
    throw std::invalid_argument("estimation_error: reference matrix is zero");
  return (theta_hat - theta_star).norm() / denom;
}

/// Counts over the p(p-1)/2 unordered off-diagonal pairs; an edge is
/// predicted when |theta_ij| exceeds the threshold.
struct EdgeConfusion {
  long tp = 0, fp = 0, tn = 0, fn = 0;
};

inline EdgeConfusion edge_confusion(
    const Eigen::MatrixXd& theta_hat,
    const std::vector<std::pair<int, int>>& support, double tau_edge) {
  if (tau_edge < 0) throw std::invalid_argument("edge_confusion: tau >= 0");
  const int p = int(theta_hat.rows());
  std::vector<char> truth(std::size_t(p) * p, 0);
  for (const auto& [i, j] : support) truth[std::size_t(i) * p + j] = 1;
  EdgeConfusion c;
  for (int i = 0; i < p; ++i)
    for (int j = i + 1; j < p; ++j) {
      bool predicted = std::abs(theta_hat(i, j)) > tau_edge;
      bool actual = truth[std::size_t(i) * p + j];
      if (predicted && actual) ++c.tp;
      else if (predicted && !actual) ++c.fp;
      else if (!predicted && actual) ++c.fn;
      else ++c.tn;
    }
  return c;
}

/// (TPR, FPR); degenerate denominators give 0 by convention.
inline std::pair<double, double> rates(const EdgeConfusion& c) {
  double tpr = (c.tp + c.fn) > 0 ? double(c.tp) / double(c.tp + c.fn) : 0.0;
  double fpr = (c.fp + c.tn) > 0 ? double(c.fp) / double(c.fp + c.tn) : 0.0;
  return {tpr, fpr};
}

inline double f_score(const EdgeConfusion& c) {
  long denom = 2 * c.tp + c.fp + c.fn;
  return denom > 0 ? 2.0 * double(c.tp) / double(denom) : 0.0;
}

inline std::vector<std::pair<int, int>> support_of_estimate(
    const Eigen::MatrixXd& theta, double tau_edge) {
  std::vector<std::pair<int, int>> s;
  for (int i = 0; i < theta.rows(); ++i)
    for (int j = i + 1; j < theta.cols(); ++j)
      if (std::abs(theta(i, j)) > tau_edge) s.emplace_back(i, j);
  return s;
}

inline Eigen::MatrixXd adjacency_of_estimate(const Eigen::MatrixXd& theta,
                                             double tau_edge) {
  const Eigen::Index p = theta.rows();
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(p, p);
  for (Eigen::Index i = 0; i < p; ++i)
    for (Eigen::Index j = 0; j < p; ++j)
      if (i != j && std::abs(theta(i, j)) > tau_edge) a(i, j) = 1;
  return a;
}

/// Newman modularity over ordered node pairs (zero diagonal adjacency):
///   Q = 1/(2E) sum_{i,j} (A_ij - d_i d_j / (2E)) [c_i == c_j].
/// Self-pairs contribute only the -d_i^2/(2E) null term.
inline double modularity(const Eigen::MatrixXd& adjacency,
                         const std::vector<int>& labels) {
  const Eigen::Index p = adjacency.rows();
  if (Eigen::Index(labels.size()) != p)
    throw std::invalid_argument("modularity: one label per node");
  Eigen::VectorXd degree = adjacency.rowwise().sum();
  double two_e = degree.sum();
  if (two_e <= 0)
    throw std::invalid_argument("modularity: graph has no edges");
  double q = 0;
  for (Eigen::Index i = 0; i < p; ++i)
    for (Eigen::Index j = 0; j < p; ++j)
      if (labels[std::size_t(i)] == labels[std::size_t(j)])
        q += adjacency(i, j) - degree[i] * degree[j] / two_e;
  return q / two_e;
}

// -- regularization sweeps ---------------------------------------------------

struct StageMetrics {
  double error = 0, tpr = 0, fpr = 0, fscore = 0;
  long iterations = 0;
  double kkt_residual = 0;
  bool converged = false;
};

struct SweepRow {
  double lambda = 0;
  std::uint64_t seed = 0;
  bool solver_error = false;     // the full stage stack failed; row kept
  std::vector<StageMetrics> stages;

  const StageMetrics& final_stage() const { return stages.back(); }
};

inline StageMetrics stage_metrics(const SolveReport<double>& report,
                                  const GroundTruth& gt, double tau_edge) {
  StageMetrics m;
  m.error = estimation_error(report.estimate.theta, gt.theta_star.theta);
  EdgeConfusion c = edge_confusion(report.estimate.theta, gt.support, tau_edge);
  std::tie(m.tpr, m.fpr) = rates(c);
  m.fscore = f_score(c);
  m.iterations = report.iterations;
  m.kkt_residual = report.kkt_residual;
  m.converged = report.converged;
  return m;
}

inline std::vector<double> log_spaced_grid(double lo, double hi, int count) {
  if (!(lo > 0) || !(hi >= lo) || count < 1)
    throw std::invalid_argument("log_spaced_grid: need 0 < lo <= hi, count >= 1");
  std::vector<double> grid(static_cast<std::size_t>(count));
  if (count == 1) {
    grid[0] = lo;
    return grid;
  }
  double step = (std::log(hi) - std::log(lo)) / (count - 1);
  for (int i = 0; i < count; ++i) grid[std::size_t(i)] = std::exp(std::log(lo) + i * step);
  return grid;
}

/// One full adaptive estimate per grid value on a fixed dataset; rows come
/// back sorted by lambda, each carrying per-stage metrics so stage-one and
/// final-stage readings are both available. Cells run concurrently; the
/// result is deterministic because cells share nothing mutable.
inline std::vector<SweepRow> roc_sweep(const Eigen::MatrixXd& sigma_hat,
                                       const GroundTruth& gt,
                                       std::vector<double> lambda_grid,
                                       const AdaptiveConfig<double>& base,
                                       double tau_edge,
                                       std::uint64_t seed_tag = 0,
                                       unsigned threads = 0) {
  if (lambda_grid.empty())
    throw std::invalid_argument("roc_sweep: empty grid");
  for (double lam : lambda_grid)
    if (lam < 0) throw std::invalid_argument("roc_sweep: negative lambda");
  std::sort(lambda_grid.begin(), lambda_grid.end());

  std::vector<SweepRow> rows(lambda_grid.size());
  auto run_cell = [&](std::size_t idx) {
    SweepRow& row = rows[idx];
    row.lambda = lambda_grid[idx];
    row.seed = seed_tag;
    AdaptiveConfig<double> cfg = base;
    cfg.updater.lambda = row.lambda;
    try {
      auto reports = estimate(sigma_hat, cfg);
      for (const auto& r : reports)
        row.stages.push_back(stage_metrics(r, gt, tau_edge));
    } catch (const std::exception&) {
      row.solver_error = true;
      StageMetrics failed;
      failed.error = std::numeric_limits<double>::quiet_NaN();
      failed.kkt_residual = std::numeric_limits<double>::quiet_NaN();
      row.stages.assign(1, failed);
    }
  };

  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = std::min<unsigned>(threads, unsigned(lambda_grid.size()));
  if (threads <= 1) {
    for (std::size_t i = 0; i < rows.size(); ++i) run_cell(i);
    return rows;
  }
  std::vector<std::future<void>> pending;
  std::atomic<std::size_t> next{0};
  for (unsigned t = 0; t < threads; ++t)
    pending.push_back(std::async(std::launch::async, [&]() {
      for (;;) {
        std::size_t idx = next.fetch_add(1);
        if (idx >= rows.size()) return;
        run_cell(idx);
      }
    }));
  for (auto& f : pending) f.get();
  return rows;
}

}  // namespace mtp2
