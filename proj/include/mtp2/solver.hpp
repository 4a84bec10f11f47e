#pragma once

#include <Eigen/Core>

#include <cmath>
#include <functional>
#include <stdexcept>
#include <utility>

#include "mtp2/linalg.hpp"
#include "mtp2/projections.hpp"

namespace mtp2 {

/// One weighted stage: minimize -log det(T) + <T, sigma_hat> - <weights, T>
/// over the chosen constraint set. The sign-constrained penalty form is
/// valid because feasible off-diagonals are nonpositive.
template <typename Scalar>
struct StageProblem {
  MatrixX<Scalar> sigma_hat;  // sample covariance, positive diagonal
  MatrixX<Scalar> weights;    // zero diagonal, nonnegative off-diagonal
  ConstraintSet constraint = ConstraintSet::MMatrix;
};

template <typename Scalar>
struct SolverConfig {
  Scalar sigma = 1;        // initial step scale
  Scalar beta = Scalar(0.5);   // backtracking factor
  Scalar alpha = Scalar(0.3);  // sufficient-decrease constant
  Scalar rel_tol = Scalar(1e-10);  // stop on ||T_{t+1}-T_t||_F/||T_t||_F
  long max_iter = 50000;
  Scalar dykstra_eps = Scalar(1e-10);
  long dykstra_max_cycles = 100000;
  Scalar step_floor = Scalar(1e-16);  // steps below this signal breakdown
  // Secondary stop: no measurable objective progress over a whole window,
  // which catches the ulp-at-a-time grind near the floating-point optimum
  // that the relative-change rule can fail to register.
  long plateau_window = 50;
  Scalar plateau_tol = Scalar(4.5e-14);  // ~200 eps, in units of 1 + |f|
};

template <typename Scalar>
struct SolveReport {
  PrecisionEstimate<Scalar> estimate;
  Scalar objective = 0;
  long iterations = 0;
  long backtracks_total = 0;
  Scalar kkt_residual = 0;
  bool converged = false;
};

// -- objectives ------------------------------------------------------------

template <typename Scalar>
Scalar objective_gaussian(const PrecisionEstimate<Scalar>& est,
                          const StageProblem<Scalar>& prob) {
  // tr(T sigma) as an elementwise dot; both matrices are symmetric.
  return -log_det(est.chol_lower) +
         est.theta.cwiseProduct(prob.sigma_hat).sum() -
         est.theta.cwiseProduct(prob.weights).sum();
}

template <typename Scalar>
MatrixX<Scalar> gradient_gaussian(const PrecisionEstimate<Scalar>& est,
                                  const StageProblem<Scalar>& prob) {
  return -inverse_pd(est.chol_lower) + prob.sigma_hat - prob.weights;
}

/// Heavy-tailed variant: -log det(T) + ((p+nu)/n) sum_i log(1 + q_i/nu)
/// with q_i the quadratic form of the i-th observation.
template <typename Scalar>
Scalar objective_student_t(const PrecisionEstimate<Scalar>& est,
                           const MatrixX<Scalar>& obs, Scalar nu) {
  const Eigen::Index n = obs.rows(), p = obs.cols();
  VectorX<Scalar> q = (obs * est.theta).cwiseProduct(obs).rowwise().sum();
  Scalar tail = q.array().unaryExpr([nu](Scalar v) {
                   return std::log1p(v / nu);
                 }).sum();
  return -log_det(est.chol_lower) + (Scalar(p) + nu) / Scalar(n) * tail;
}

template <typename Scalar>
MatrixX<Scalar> gradient_student_t(const PrecisionEstimate<Scalar>& est,
                                   const MatrixX<Scalar>& obs, Scalar nu) {
  const Eigen::Index n = obs.rows(), p = obs.cols();
  VectorX<Scalar> q = (obs * est.theta).cwiseProduct(obs).rowwise().sum();
  VectorX<Scalar> w = (q.array() + nu).inverse();
  MatrixX<Scalar> scatter = obs.transpose() * w.asDiagonal() * obs;
  return -inverse_pd(est.chol_lower) +
         (Scalar(p) + nu) / Scalar(n) * scatter;
}

namespace detail {

template <typename Scalar>
struct GaussianStage {
  const StageProblem<Scalar>& prob;
  Scalar value(const PrecisionEstimate<Scalar>& est) const {
    return objective_gaussian(est, prob);
  }
  MatrixX<Scalar> gradient(const PrecisionEstimate<Scalar>& est) const {
    return gradient_gaussian(est, prob);
  }
  ConstraintSet constraint() const { return prob.constraint; }
};

template <typename Scalar>
struct StudentTStage {
  const MatrixX<Scalar>& obs;
  Scalar nu;
  const MatrixX<Scalar>& weights;
  ConstraintSet cs;
  Scalar value(const PrecisionEstimate<Scalar>& est) const {
    return objective_student_t(est, obs, nu) -
           est.theta.cwiseProduct(weights).sum();
  }
  MatrixX<Scalar> gradient(const PrecisionEstimate<Scalar>& est) const {
    return gradient_student_t(est, obs, nu) - weights;
  }
  ConstraintSet constraint() const { return cs; }
};

}  // namespace detail

// -- line search -----------------------------------------------------------

template <typename Scalar>
struct LineSearchStep {
  PrecisionEstimate<Scalar> next;
  Scalar objective_next = 0;
  Scalar step = 0;          // accepted eta = sigma * beta^m
  long backtracks = 0;      // accepted m
  long pd_rejections = 0;   // trials that failed the Cholesky gate
};

namespace detail {

// Try eta = sigma * beta^m for m = 0, 1, ... until the projected step is
// positive definite and satisfies the sufficient-decrease test
//   f(T+) <= f(T) - (alpha/eta) ||T - T+||_F^2,
// i.e. the decrease condition written with the gradient mapping at the same
// eta used in the update.
template <typename Scalar, typename Model>
LineSearchStep<Scalar> line_search_impl(const Model& model,
                                        const PrecisionEstimate<Scalar>& est,
                                        Scalar f_current,
                                        const MatrixX<Scalar>& grad,
                                        const SolverConfig<Scalar>& cfg) {
  LineSearchStep<Scalar> out;
  Scalar eta = cfg.sigma;
  for (long m = 0;; ++m, eta *= cfg.beta) {
    if (eta < cfg.step_floor)
      throw std::runtime_error(
          "line_search: step underflow without an acceptable iterate");
    MatrixX<Scalar> candidate = project_constraint<Scalar>(
        est.theta - eta * grad, model.constraint(), cfg.dykstra_eps,
        cfg.dykstra_max_cycles);
    auto chol = cholesky(candidate);
    if (!chol) {
      ++out.pd_rejections;
      continue;
    }
    PrecisionEstimate<Scalar> next{std::move(candidate), std::move(*chol),
                                   model.constraint()};
    Scalar f_next = model.value(next);
    Scalar moved = (est.theta - next.theta).squaredNorm();
    Scalar decrease = moved * cfg.alpha / eta;
    // At a non-fixed point the decrease test implies a strictly smaller
    // objective; insisting on that here rejects rounding-level plateau
    // steps (e.g. an eta near 2/L cycling between two points while the
    // required decrease underflows) and backtracks them to the fixed point.
    if (f_next <= f_current - decrease && (f_next < f_current || moved == 0)) {
      out.next = std::move(next);
      out.objective_next = f_next;
      out.step = eta;
      out.backtracks = m;
      return out;
    }
  }
}

}  // namespace detail

template <typename Scalar>
LineSearchStep<Scalar> line_search(const PrecisionEstimate<Scalar>& est,
                                   const MatrixX<Scalar>& grad,
                                   const StageProblem<Scalar>& prob,
                                   const SolverConfig<Scalar>& cfg) {
  detail::GaussianStage<Scalar> model{prob};
  return detail::line_search_impl(model, est, model.value(est), grad, cfg);
}

// -- KKT certificate -------------------------------------------------------

/// Implied multipliers and the worst violation across the KKT blocks:
/// stationarity on inactive entries, multiplier nonnegativity on active
/// ones, diagonal stationarity, and primal feasibility. Row-sum
/// multipliers (diagonally dominant case) are recovered from the diagonal
/// stationarity equations, where they appear alone.
template <typename Scalar>
struct KktCertificate {
  Scalar residual = 0;
  MatrixX<Scalar> gamma;            // sign-constraint multipliers
  VectorX<Scalar> row_multipliers;  // zero unless DiagDomMMatrix
};

namespace detail {

// neg_grad = -grad f(T) evaluated at the candidate solution; for the
// Gaussian stage this is T^{-1} - sigma_hat + weights.
template <typename Scalar>
KktCertificate<Scalar> kkt_from_neg_gradient(
    const PrecisionEstimate<Scalar>& est, const MatrixX<Scalar>& neg_grad,
    ConstraintSet cs, Scalar activity_tol) {
  const Eigen::Index p = est.theta.rows();
  KktCertificate<Scalar> cert;
  cert.row_multipliers = VectorX<Scalar>::Zero(p);
  VectorX<Scalar> row_sums = est.theta.rowwise().sum();

  Scalar worst = 0;
  if (cs == ConstraintSet::DiagDomMMatrix) {
    for (Eigen::Index i = 0; i < p; ++i) {
      if (row_sums[i] <= activity_tol)
        cert.row_multipliers[i] = std::max(-neg_grad(i, i), Scalar(0));
      worst = std::max(worst, -row_sums[i]);  // primal row-sum violation
    }
  }
  cert.gamma = MatrixX<Scalar>::Zero(p, p);
  for (Eigen::Index i = 0; i < p; ++i) {
    // diagonal stationarity: neg_grad_ii + nu_i = 0
    worst = std::max(worst,
                     std::abs(neg_grad(i, i) + cert.row_multipliers[i]));
    for (Eigen::Index j = 0; j < p; ++j) {
      if (i == j) continue;
      Scalar g = neg_grad(i, j) +
                 (cert.row_multipliers[i] + cert.row_multipliers[j]) / 2;
      cert.gamma(i, j) = g;
      worst = std::max(worst, est.theta(i, j));  // primal sign violation
      if (std::abs(est.theta(i, j)) <= activity_tol)
        worst = std::max(worst, -g);  // active: multiplier must be >= 0
      else
        worst = std::max(worst, std::abs(g));  // inactive: stationarity
    }
  }
  cert.residual = worst;
  return cert;
}

}  // namespace detail

template <typename Scalar>
KktCertificate<Scalar> kkt_certificate(const PrecisionEstimate<Scalar>& est,
                                       const StageProblem<Scalar>& prob,
                                       Scalar activity_tol = Scalar(1e-8)) {
  MatrixX<Scalar> neg_grad =
      inverse_pd(est.chol_lower) - prob.sigma_hat + prob.weights;
  return detail::kkt_from_neg_gradient(est, neg_grad, prob.constraint,
                                       activity_tol);
}

template <typename Scalar>
Scalar kkt_residual(const PrecisionEstimate<Scalar>& est,
                    const StageProblem<Scalar>& prob) {
  return kkt_certificate(est, prob).residual;
}

// -- stage solver ----------------------------------------------------------

/// Called after each accepted step with the new iterate and its objective.
template <typename Scalar>
using IterationObserver =
    std::function<void(const PrecisionEstimate<Scalar>&, Scalar)>;

/// Feasible diagonal start: diag(1 / (sigma_ii + 1e-8)). Scale-aware and
/// inside both constraint sets.
template <typename Scalar>
PrecisionEstimate<Scalar> initial_estimate(const MatrixX<Scalar>& sigma_hat,
                                           ConstraintSet cs) {
  const Eigen::Index p = sigma_hat.rows();
  MatrixX<Scalar> theta = MatrixX<Scalar>::Zero(p, p);
  theta.diagonal() =
      (sigma_hat.diagonal().array() + Scalar(1e-8)).inverse().matrix();
  auto est = certify(theta, cs);
  if (!est)
    throw std::invalid_argument(
        "initial_estimate: sample covariance needs a positive diagonal");
  return std::move(*est);
}

namespace detail {

template <typename Scalar, typename Model>
SolveReport<Scalar> solve_loop(const Model& model,
                               PrecisionEstimate<Scalar> start,
                               const SolverConfig<Scalar>& cfg,
                               const IterationObserver<Scalar>& observer) {
  SolveReport<Scalar> report;
  PrecisionEstimate<Scalar> est = std::move(start);
  Scalar f = model.value(est);
  Scalar f_window = f;
  for (long t = 0; t < cfg.max_iter; ++t) {
    MatrixX<Scalar> grad = model.gradient(est);
    LineSearchStep<Scalar> step = line_search_impl(model, est, f, grad, cfg);
    Scalar rel = (step.next.theta - est.theta).norm() / est.theta.norm();
    est = std::move(step.next);
    f = step.objective_next;
    report.backtracks_total += step.backtracks;
    ++report.iterations;
    if (observer) observer(est, f);
    if (rel < cfg.rel_tol) {
      report.converged = true;
      break;
    }
    if (cfg.plateau_window > 0 && (t + 1) % cfg.plateau_window == 0) {
      if (f_window - f <= cfg.plateau_tol * (1 + std::abs(f))) {
        report.converged = true;
        break;
      }
      f_window = f;
    }
  }
  MatrixX<Scalar> neg_grad = -model.gradient(est);
  report.kkt_residual =
      kkt_from_neg_gradient(est, neg_grad, model.constraint(), Scalar(1e-8))
          .residual;
  report.objective = f;
  report.estimate = std::move(est);
  return report;
}

}  // namespace detail

/// Run the gradient projection loop until the relative change of the
/// iterate drops below rel_tol or max_iter is hit. Non-convergence is
/// reported, not thrown; step underflow propagates as an exception.
template <typename Scalar>
SolveReport<Scalar> solve_stage(const StageProblem<Scalar>& prob,
                                const PrecisionEstimate<Scalar>& theta_init,
                                const SolverConfig<Scalar>& cfg,
                                const IterationObserver<Scalar>& observer = {}) {
  detail::GaussianStage<Scalar> model{prob};
  return detail::solve_loop(model, theta_init, cfg, observer);
}

/// Same loop for the heavy-tailed objective with an optional weighted
/// penalty (pass a zero matrix for the plain problem).
template <typename Scalar>
SolveReport<Scalar> solve_stage_student_t(
    const MatrixX<Scalar>& obs, Scalar nu, const MatrixX<Scalar>& weights,
    ConstraintSet cs, const PrecisionEstimate<Scalar>& theta_init,
    const SolverConfig<Scalar>& cfg,
    const IterationObserver<Scalar>& observer = {}) {
  detail::StudentTStage<Scalar> model{obs, nu, weights, cs};
  return detail::solve_loop(model, theta_init, cfg, observer);
}

}  // namespace mtp2
