#pragma once

#include <Eigen/Core>

#include <algorithm>
#include <stdexcept>
#include <vector>

#include "mtp2/solver.hpp"

namespace mtp2 {

/// Maps the magnitude of a previous-stage entry to its next-stage penalty
/// weight: constant for the plain l1 penalty, or the derivative of a folded
/// concave penalty (vanishing beyond shape * lambda) for the nonconvex ones.
template <typename Scalar>
struct WeightUpdater {
  enum class Kind { Lasso, ScadDeriv, McpDeriv };
  Kind kind = Kind::Lasso;
  Scalar lambda = Scalar(0.1);
  Scalar shape = Scalar(3.7);  // SCAD a (> 2) or MCP gamma (> 1)

  static WeightUpdater lasso(Scalar lambda) {
    return {Kind::Lasso, lambda, Scalar(0)};
  }
  static WeightUpdater scad(Scalar lambda, Scalar a = Scalar(3.7)) {
    return {Kind::ScadDeriv, lambda, a};
  }
  static WeightUpdater mcp(Scalar lambda, Scalar gamma = Scalar(3.0)) {
    return {Kind::McpDeriv, lambda, gamma};
  }
};

template <typename Scalar>
Scalar weight(const WeightUpdater<Scalar>& u, Scalar x) {
  switch (u.kind) {
    case WeightUpdater<Scalar>::Kind::Lasso:
      return u.lambda;
    case WeightUpdater<Scalar>::Kind::ScadDeriv:
      if (x <= u.lambda) return u.lambda;
      return std::max(u.shape * u.lambda - x, Scalar(0)) / (u.shape - 1);
    case WeightUpdater<Scalar>::Kind::McpDeriv:
      return std::max(u.lambda - x / u.shape, Scalar(0));
  }
  return u.lambda;
}

/// Next-stage weight matrix: entrywise p_lambda(|theta_prev|) off the
/// diagonal, zero on it.
template <typename Scalar>
MatrixX<Scalar> build_weights(const MatrixX<Scalar>& theta_prev,
                              const WeightUpdater<Scalar>& u) {
  const Eigen::Index p = theta_prev.rows();
  MatrixX<Scalar> w(p, p);
  for (Eigen::Index j = 0; j < p; ++j)
    for (Eigen::Index i = 0; i < p; ++i)
      w(i, j) = (i == j) ? Scalar(0)
                         : weight(u, std::abs(theta_prev(i, j)));
  return w;
}

template <typename Scalar>
struct AdaptiveConfig {
  long stages = 5;
  WeightUpdater<Scalar> updater;
  SolverConfig<Scalar> solver;
  ConstraintSet constraint = ConstraintSet::MMatrix;
  // Optional cross-stage stop on the relative change of the estimate;
  // zero disables it and all stages run.
  Scalar stage_delta_tol = 0;
};

namespace detail {

template <typename Scalar, typename SolveStage>
std::vector<SolveReport<Scalar>> staged_estimate(
    const MatrixX<Scalar>& sigma_hat, const AdaptiveConfig<Scalar>& cfg,
    const SolveStage& solve) {
  if (cfg.stages < 1)
    throw std::invalid_argument("estimate: need at least one stage");
  std::vector<SolveReport<Scalar>> reports;
  reports.reserve(static_cast<std::size_t>(cfg.stages));
  // Diagonal start: off-diagonals are zero, so the first stage sees the
  // uniform weights p_lambda(0) = lambda regardless of the updater.
  PrecisionEstimate<Scalar> previous =
      initial_estimate(sigma_hat, cfg.constraint);
  for (long k = 0; k < cfg.stages; ++k) {
    MatrixX<Scalar> lam = build_weights(previous.theta, cfg.updater);
    SolveReport<Scalar> report = solve(lam, previous);
    bool failed = !report.converged;
    Scalar delta = (report.estimate.theta - previous.theta).norm() /
                   previous.theta.norm();
    previous = report.estimate;
    reports.push_back(std::move(report));
    if (failed) break;  // abort later stages, return partial results
    if (cfg.stage_delta_tol > 0 && delta < cfg.stage_delta_tol) break;
  }
  return reports;
}

}  // namespace detail

/// Multi-stage estimation: stage one is the uniformly weighted l1 problem,
/// every later stage reweights from the previous estimate and warm-starts
/// on it. Returns one report per completed stage.
template <typename Scalar>
std::vector<SolveReport<Scalar>> estimate(const MatrixX<Scalar>& sigma_hat,
                                          const AdaptiveConfig<Scalar>& cfg) {
  return detail::staged_estimate<Scalar>(
      sigma_hat, cfg,
      [&](const MatrixX<Scalar>& lam, const PrecisionEstimate<Scalar>& warm) {
        StageProblem<Scalar> prob{sigma_hat, lam, cfg.constraint};
        return solve_stage(prob, warm, cfg.solver);
      });
}

/// Staged estimation under the heavy-tailed objective; the sample
/// covariance of the observations seeds the diagonal start.
template <typename Scalar>
std::vector<SolveReport<Scalar>> estimate_student_t(
    const MatrixX<Scalar>& obs, Scalar nu, const AdaptiveConfig<Scalar>& cfg) {
  MatrixX<Scalar> sigma_hat =
      obs.transpose() * obs / Scalar(obs.rows());
  return detail::staged_estimate<Scalar>(
      sigma_hat, cfg,
      [&](const MatrixX<Scalar>& lam, const PrecisionEstimate<Scalar>& warm) {
        return solve_stage_student_t(obs, nu, lam, cfg.constraint, warm,
                                     cfg.solver);
      });
}

}  // namespace mtp2
