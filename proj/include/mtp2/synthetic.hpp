#pragma once

#include <Eigen/Core>
#include <Eigen/Eigenvalues>

#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "mtp2/linalg.hpp"
#include "mtp2/rng.hpp"

namespace mtp2 {

enum class GraphFamily { Grid, Line, BarabasiAlbert, StochasticBlock };

inline std::string to_string(GraphFamily f) {
  switch (f) {
    case GraphFamily::Grid: return "grid";
    case GraphFamily::Line: return "line";
    case GraphFamily::BarabasiAlbert: return "ba";
    case GraphFamily::StochasticBlock: return "sbm";
  }
  return "?";
}

struct GraphSpec {
  GraphFamily family = GraphFamily::Grid;
  int p = 50;
  int grid_rows = 0;  // 0 = derive the most square factor pair of p
  int grid_cols = 0;
  int ba_edges_per_node = 2;  // attachment count per arriving node
  int sbm_blocks = 4;
  double sbm_within = 0.25;
  double sbm_between = 0.01;
  double weight_low = 2.0;
  double weight_high = 5.0;
  std::uint64_t seed = 1;
};

struct GroundTruth {
  PrecisionEstimate<double> theta_star;
  Eigen::MatrixXd sigma_star;                 // (theta_star)^{-1}
  std::vector<std::pair<int, int>> support;   // i < j, zero-based
  // Diagonally dominant case: the drawn V, reproduced bitwise by
  // theta.row(i).sum(). Empty for the unit-diagonal construction.
  Eigen::VectorXd row_slack;
};

namespace detail {

inline std::vector<std::pair<int, int>> graph_edges(const GraphSpec& spec,
                                                    Rng& rng) {
  std::vector<std::pair<int, int>> edges;
  const int p = spec.p;
  if (p < 2) throw std::invalid_argument("graph: need p >= 2");
  switch (spec.family) {
    case GraphFamily::Line: {
      for (int i = 0; i + 1 < p; ++i) edges.emplace_back(i, i + 1);
      break;
    }
    case GraphFamily::Grid: {
      int rows = spec.grid_rows, cols = spec.grid_cols;
      if (rows <= 0 || cols <= 0) {
        rows = 1;
        for (int r = 2; r * r <= p; ++r)
          if (p % r == 0) rows = r;
        cols = p / rows;
        if (rows == 1)
          throw std::invalid_argument(
              "graph: p has no nontrivial factor pair; pass explicit grid "
              "sides");
      }
      if (rows * cols != p)
        throw std::invalid_argument("graph: grid sides must multiply to p");
      auto id = [cols](int i, int j) { return i * cols + j; };
      for (int i = 0; i < rows; ++i)
        for (int j = 0; j < cols; ++j) {
          if (j + 1 < cols) edges.emplace_back(id(i, j), id(i, j + 1));
          if (i + 1 < rows) edges.emplace_back(id(i, j), id(i + 1, j));
        }
      break;
    }
    case GraphFamily::BarabasiAlbert: {
      // Connected two-node seed; each arriving node attaches
      // degree-proportionally without replacement.
      const int m = spec.ba_edges_per_node;
      if (m < 1) throw std::invalid_argument("graph: ba attachment >= 1");
      std::vector<double> degree(p, 0.0);
      edges.emplace_back(0, 1);
      degree[0] = degree[1] = 1;
      for (int v = 2; v < p; ++v) {
        int picks = std::min(m, v);
        std::vector<char> chosen(v, 0);
        for (int e = 0; e < picks; ++e) {
          double total = 0;
          for (int u = 0; u < v; ++u)
            if (!chosen[u]) total += degree[u];
          double x = rng.uniform(0.0, total);
          int target = -1;
          for (int u = 0; u < v; ++u) {
            if (chosen[u]) continue;
            x -= degree[u];
            if (x <= 0) {
              target = u;
              break;
            }
          }
          if (target < 0) {  // guard the rounding tail
            for (int u = v - 1; u >= 0; --u)
              if (!chosen[u]) {
                target = u;
                break;
              }
          }
          chosen[target] = 1;
          edges.emplace_back(target, v);
          degree[target] += 1;
          degree[v] += 1;
        }
      }
      break;
    }
    case GraphFamily::StochasticBlock: {
      const int blocks = spec.sbm_blocks;
      if (blocks < 1) throw std::invalid_argument("graph: sbm blocks >= 1");
      std::vector<int> label(p);
      int base = p / blocks, extra = p % blocks, node = 0;
      for (int b = 0; b < blocks; ++b) {
        int size = base + (b < extra ? 1 : 0);
        for (int s = 0; s < size; ++s) label[node++] = b;
      }
      for (int i = 0; i < p; ++i)
        for (int j = i + 1; j < p; ++j) {
          double prob =
              label[i] == label[j] ? spec.sbm_within : spec.sbm_between;
          if (rng.uniform01() < prob) edges.emplace_back(i, j);
        }
      break;
    }
  }
  return edges;
}

/// Largest eigenvalue of a symmetric nonnegative matrix: power iteration on
/// A + I (the shift separates the dominant eigenvalue on bipartite
/// structures), dense eigensolver as fallback when it stalls.
inline double largest_eigenvalue(const Eigen::MatrixXd& a) {
  const Eigen::Index p = a.rows();
  Eigen::VectorXd v = Eigen::VectorXd::Constant(p, 1.0 / std::sqrt(double(p)));
  double prev = 0;
  const long cap = 1000 + 50 * long(p);
  for (long it = 0; it < cap; ++it) {
    Eigen::VectorXd w = a * v + v;
    double norm = w.norm();
    if (norm == 0) return 0;  // edgeless graph
    v = w / norm;
    double lambda = v.dot(a * v);
    if (std::abs(lambda - prev) <= 1e-12 * std::max(1.0, std::abs(lambda)))
      return lambda;
    prev = lambda;
  }
  return Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(a)
      .eigenvalues()
      .maxCoeff();
}

inline std::vector<std::pair<int, int>> support_of(const Eigen::MatrixXd& a) {
  std::vector<std::pair<int, int>> s;
  for (int i = 0; i < a.rows(); ++i)
    for (int j = i + 1; j < a.cols(); ++j)
      if (a(i, j) != 0) s.emplace_back(i, j);
  return s;
}

}  // namespace detail

/// Weighted adjacency with the requested structure; edge weights are
/// i.i.d. uniform on [weight_low, weight_high].
inline Eigen::MatrixXd generate_adjacency(const GraphSpec& spec) {
  Rng rng(spec.seed);
  auto edges = detail::graph_edges(spec, rng);
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(spec.p, spec.p);
  for (const auto& [i, j] : edges) {
    double w = rng.uniform(spec.weight_low, spec.weight_high);
    a(i, j) = w;
    a(j, i) = w;
  }
  return a;
}

/// M-matrix ground truth: theta = delta I - A with delta = 1.05 lambda_max(A),
/// rescaled by a diagonal congruence so the covariance has unit diagonal.
inline GroundTruth build_precision_m(const Eigen::MatrixXd& a) {
  const Eigen::Index p = a.rows();
  double lam_max = detail::largest_eigenvalue(a);
  double delta = lam_max > 0 ? 1.05 * lam_max : 1.0;  // edgeless: identity
  Eigen::MatrixXd theta = -a;
  theta.diagonal().array() += delta;

  auto chol = cholesky<double>(theta);
  if (!chol)
    throw std::runtime_error("build_precision_m: base matrix not PD");
  Eigen::MatrixXd sigma = inverse_pd(*chol);
  Eigen::VectorXd e = sigma.diagonal().cwiseSqrt();
  theta = e.asDiagonal() * theta * e.asDiagonal();

  auto est = certify<double>(theta, ConstraintSet::MMatrix);
  if (!est)
    throw std::runtime_error("build_precision_m: normalized matrix not PD");
  GroundTruth gt;
  gt.sigma_star = inverse_pd(est->chol_lower);
  gt.theta_star = std::move(*est);
  gt.support = detail::support_of(a);
  return gt;
}

/// Diagonally dominant ground truth: theta = D - A + V with D the degree
/// weights and V_ii uniform on (0,1), so every row sum equals V_ii. The
/// diagonal is compensated until the floating-point row sum reproduces the
/// drawn V exactly; row_slack records the identity.
inline GroundTruth build_precision_ddm(const Eigen::MatrixXd& a,
                                       std::uint64_t seed) {
  const Eigen::Index p = a.rows();
  Rng rng(seed);
  Eigen::MatrixXd theta = -a;
  Eigen::VectorXd v(p);
  for (Eigen::Index i = 0; i < p; ++i) {
    v[i] = rng.uniform01();
    theta(i, i) = a.row(i).sum() + v[i];
    for (int round = 0; round < 4; ++round) {
      double realized = theta.row(i).sum();
      if (realized == v[i]) break;
      theta(i, i) += v[i] - realized;
    }
    if (theta.row(i).sum() != v[i]) v[i] = theta.row(i).sum();
  }

  auto est = certify<double>(theta, ConstraintSet::DiagDomMMatrix);
  if (!est) throw std::runtime_error("build_precision_ddm: matrix not PD");
  GroundTruth gt;
  gt.sigma_star = inverse_pd(est->chol_lower);
  gt.theta_star = std::move(*est);
  gt.support = detail::support_of(a);
  gt.row_slack = std::move(v);
  return gt;
}

/// n i.i.d. rows from N(0, sigma_star), as x = L z with L the Cholesky
/// factor of the covariance. Deterministic given the seed.
inline Eigen::MatrixXd sample_gaussian(const GroundTruth& gt, long n,
                                       std::uint64_t seed) {
  if (n < 1) throw std::invalid_argument("sample_gaussian: n >= 1");
  const Eigen::Index p = gt.sigma_star.rows();
  auto chol = cholesky<double>(gt.sigma_star);
  if (!chol)
    throw std::runtime_error("sample_gaussian: covariance not PD");
  Rng rng(seed);
  Eigen::MatrixXd x(n, p);
  Eigen::VectorXd z(p);
  for (long i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < p; ++j) z[j] = rng.normal();
    x.row(i) = (*chol * z).transpose();
  }
  return x;
}

/// (1/n) X^T X; the model is zero-mean, so no centering here.
inline Eigen::MatrixXd sample_covariance(const Eigen::MatrixXd& x) {
  if (x.rows() < 1) throw std::invalid_argument("sample_covariance: n >= 1");
  return x.transpose() * x / double(x.rows());
}

/// Ground truth for the given spec under the requested constraint set.
inline GroundTruth generate_ground_truth(const GraphSpec& spec,
                                         ConstraintSet cs) {
  Eigen::MatrixXd a = generate_adjacency(spec);
  if (cs == ConstraintSet::MMatrix) return build_precision_m(a);
  // Offset the seed so the diagonal draw does not replay the edge weights.
  return build_precision_ddm(a, spec.seed + 0x9e3779b97f4a7c15ull);
}

}  // namespace mtp2
