#pragma once

#include <Eigen/Core>

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

#include "mtp2/linalg.hpp"

namespace mtp2 {

/// Clamp off-diagonal entries to (-inf, 0]; the diagonal is left free.
/// Euclidean projection onto { X : X_ij <= 0 for i != j }.
template <typename Derived>
MatrixX<typename Derived::Scalar> project_nonpos_offdiag(
    const Eigen::MatrixBase<Derived>& x) {
  using Scalar = typename Derived::Scalar;
  MatrixX<Scalar> out = x.derived().cwiseMin(Scalar(0));
  out.diagonal() = x.derived().diagonal();
  return out;
}

/// Euclidean projection onto the subspace of symmetric matrices.
template <typename Derived>
MatrixX<typename Derived::Scalar> symmetrize(
    const Eigen::MatrixBase<Derived>& y) {
  return (y.derived() + y.derived().transpose()) / 2;
}

namespace detail {

// g(rho) = rho + sum_{i != r} min(y_i + rho, 0) + y_r, the piecewise linear
// equation whose unique root gives the shift in the tight case of the row
// projection. Strictly increasing in rho.
template <typename Scalar>
Scalar row_shift_gap(const VectorX<Scalar>& y, Eigen::Index r, Scalar rho) {
  Scalar g = rho + y[r];
  for (Eigen::Index i = 0; i < y.size(); ++i)
    if (i != r) g += std::min(y[i] + rho, Scalar(0));
  return g;
}

}  // namespace detail

/// Root of g(rho) = rho + sum_{i != r} min(y_i + rho, 0) + y_r via the
/// sort-and-scan procedure: sort y without its r-th entry ascending, pick
/// the largest m whose running mean (y_r + sum_{i<=m} yt_i)/(m+1) exceeds
/// yt_m, and read the root off that segment. When no m qualifies, every
/// shifted off-entry clamps to zero and the root is -y_r. O(p log p),
/// sort-dominated. The caller may pass a scratch buffer to reuse.
///
/// Only meaningful when y_r < -sum_{i != r} min(y_i, 0); misuse throws.
template <typename Scalar>
Scalar find_rho(const VectorX<Scalar>& y, Eigen::Index r,
                std::vector<Scalar>* scratch = nullptr) {
  const Eigen::Index p = y.size();
  Scalar clamped_sum = 0;
  for (Eigen::Index i = 0; i < p; ++i)
    if (i != r) clamped_sum += std::min(y[i], Scalar(0));
  if (y[r] + clamped_sum >= 0)
    throw std::invalid_argument("find_rho: row already satisfies the sum "
                                "constraint after clamping");

  std::vector<Scalar> local;
  std::vector<Scalar>& sorted = scratch ? *scratch : local;
  sorted.clear();
  sorted.reserve(static_cast<std::size_t>(p > 0 ? p - 1 : 0));
  for (Eigen::Index i = 0; i < p; ++i)
    if (i != r) sorted.push_back(y[i]);
  std::stable_sort(sorted.begin(), sorted.end());

  Eigen::Index best_m = 0;
  Scalar prefix = 0, best_prefix = 0;
  for (std::size_t m = 1; m <= sorted.size(); ++m) {
    prefix += sorted[m - 1];
    if ((y[r] + prefix) / Scalar(m + 1) > sorted[m - 1]) {
      best_m = static_cast<Eigen::Index>(m);
      best_prefix = prefix;
    }
  }
  Scalar rho = (-y[r] - best_prefix) / Scalar(best_m + 1);

  // One Newton polish on the piecewise linear g: exactifies the root when
  // accumulation error is at the scale of the inputs.
  Scalar g = detail::row_shift_gap(y, r, rho);
  if (g != Scalar(0)) {
    Scalar slope = 1;
    for (Eigen::Index i = 0; i < p; ++i)
      if (i != r && y[i] + rho < Scalar(0)) slope += 1;
    rho -= g / slope;
  }
  return rho;
}

/// Projection of a row onto { x : x^T 1 >= 0, x_i <= 0 for i != r }. The
/// r-th coordinate (the diagonal in the matrix problem) is unconstrained
/// in sign. Output keeps the sign constraints exactly and the sum
/// constraint to >= -1e-12.
template <typename Scalar>
VectorX<Scalar> project_row_sc(const VectorX<Scalar>& y, Eigen::Index r,
                               std::vector<Scalar>* scratch = nullptr) {
  const Eigen::Index p = y.size();
  if (r < 0 || r >= p) throw std::invalid_argument("project_row_sc: bad row");
  VectorX<Scalar> x(p);
  Scalar clamped_sum = 0;
  for (Eigen::Index i = 0; i < p; ++i)
    if (i != r) clamped_sum += std::min(y[i], Scalar(0));

  if (y[r] + clamped_sum >= 0) {
    for (Eigen::Index i = 0; i < p; ++i) x[i] = std::min(y[i], Scalar(0));
    x[r] = y[r];
  } else {
    const Scalar rho = find_rho(y, r, scratch);
    for (Eigen::Index i = 0; i < p; ++i)
      x[i] = std::min(y[i] + rho, Scalar(0));
    x[r] = y[r] + rho;
  }
  // The free coordinate absorbs any residual rounding in the sum; only
  // boundary rows where the constraint is (numerically) tight get nudged.
  Scalar s = x.sum();
  if (s < Scalar(0)) x[r] -= s;
  return x;
}

/// Row-by-row projection onto { X : X 1 >= 0, X_ij <= 0 for i != j }; rows
/// are independent, each with its diagonal entry unconstrained.
template <typename Derived>
MatrixX<typename Derived::Scalar> project_sc(
    const Eigen::MatrixBase<Derived>& y) {
  using Scalar = typename Derived::Scalar;
  const Eigen::Index p = y.rows();
  MatrixX<Scalar> out(p, y.cols());
  std::vector<Scalar> scratch;
  for (Eigen::Index r = 0; r < p; ++r) {
    VectorX<Scalar> row = y.derived().row(r).transpose();
    out.row(r) = project_row_sc(row, r, &scratch).transpose();
  }
  return out;
}

/// State of the alternating projection between the symmetric subspace and
/// the row-sum / sign polyhedron. Only the polyhedron carries an increment;
/// the subspace needs none.
template <typename Scalar>
struct DykstraState {
  MatrixX<Scalar> a;  // current symmetric iterate
  MatrixX<Scalar> c;  // current polyhedral iterate (possibly asymmetric)
  MatrixX<Scalar> q;  // increment attached to the polyhedron
  long iteration = 0;
  Scalar gap = std::numeric_limits<Scalar>::infinity();  // ||a - c||_F

  explicit DykstraState(const MatrixX<Scalar>& y)
      : a(y.rows(), y.cols()),
        c(y),
        q(MatrixX<Scalar>::Zero(y.rows(), y.cols())) {}
};

/// One cycle: a <- sym(c), c <- P_rows(a + q), q <- a - c + q.
template <typename Scalar>
void dykstra_step(DykstraState<Scalar>& s) {
  s.a = symmetrize(s.c);
  s.c = project_sc(s.a + s.q);
  s.q += s.a - s.c;
  s.gap = (s.a - s.c).norm();
  ++s.iteration;
}

/// Euclidean projection onto { X symmetric, X 1 >= 0, X_ij <= 0 (i != j) }
/// by alternating projections with increments, stopped when the two
/// iterates agree to eps in Frobenius norm. Returns the symmetric iterate.
template <typename Scalar>
MatrixX<Scalar> dykstra_sa_sc(const MatrixX<Scalar>& y, Scalar eps,
                              long max_cycles = 100000) {
  if (!(eps > 0)) throw std::invalid_argument("dykstra_sa_sc: eps must be > 0");
  DykstraState<Scalar> s(y);
  do {
    dykstra_step(s);
    // The sign constraints hold exactly on every returned iterate. The
    // symmetric iterate can carry positive off-diagonal noise up to the
    // gap when the first cycle already meets eps (the input enters it
    // unclamped); clamping moves it toward the feasible set by no more
    // than the error already present.
    if (s.gap < eps) return project_nonpos_offdiag(s.a);
  } while (s.iteration < max_cycles);
  throw std::runtime_error("dykstra_sa_sc: no convergence within cycle cap");
}

/// Dispatch to the projection matching the constraint set. The M-matrix
/// path assumes a symmetric input, which the solver maintains.
template <typename Scalar>
MatrixX<Scalar> project_constraint(const MatrixX<Scalar>& x, ConstraintSet cs,
                                   Scalar dykstra_eps,
                                   long dykstra_max_cycles = 100000) {
  if (cs == ConstraintSet::MMatrix) return project_nonpos_offdiag(x);
  return dykstra_sa_sc(x, dykstra_eps, dykstra_max_cycles);
}

}  // namespace mtp2
