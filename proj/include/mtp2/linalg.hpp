#pragma once

#include <Eigen/Cholesky>
#include <Eigen/Core>

#include <optional>

namespace mtp2 {

template <typename Scalar>
using MatrixX = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
template <typename Scalar>
using VectorX = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

/// Which feasible set an estimate lives in: symmetric positive definite
/// M-matrices, or the subset with nonnegative row sums.
enum class ConstraintSet { MMatrix, DiagDomMMatrix };

/// Row sums of a diagonally dominant iterate are certified down to this
/// slack; the alternating projection stops at finite tolerance, so exact
/// nonnegativity is unattainable.
inline constexpr double kRowSumSlack = 1e-9;

template <typename Derived>
bool is_symmetric(const Eigen::MatrixBase<Derived>& m,
                  typename Derived::Scalar tol = 0) {
  return m.rows() == m.cols() &&
         (m.derived() - m.derived().transpose()).cwiseAbs().maxCoeff() <= tol;
}

/// Lower Cholesky factor of a positive definite matrix. Absence signals an
/// indefinite input; this is the positive definiteness certificate used
/// throughout (strictly positive pivots, no eigen decomposition).
template <typename Scalar>
std::optional<MatrixX<Scalar>> cholesky(const MatrixX<Scalar>& m) {
  Eigen::LLT<MatrixX<Scalar>> llt(m);
  if (llt.info() != Eigen::Success) return std::nullopt;
  return MatrixX<Scalar>(llt.matrixL());
}

/// log det(L L^T) = 2 * sum_i log L_ii.
template <typename Scalar>
Scalar log_det(const MatrixX<Scalar>& chol_lower) {
  return 2 * chol_lower.diagonal().array().log().sum();
}

/// Inverse from a Cholesky factor, symmetrized to kill round-off asymmetry.
template <typename Scalar>
MatrixX<Scalar> inverse_pd(const MatrixX<Scalar>& chol_lower) {
  const Eigen::Index p = chol_lower.rows();
  MatrixX<Scalar> inv = MatrixX<Scalar>::Identity(p, p);
  chol_lower.template triangularView<Eigen::Lower>().solveInPlace(inv);
  chol_lower.transpose()
      .template triangularView<Eigen::Upper>()
      .solveInPlace(inv);
  return MatrixX<Scalar>(((inv + inv.transpose()) / 2).eval());
}

/// True when theta has exactly nonpositive off-diagonals and, for the
/// diagonally dominant set, row sums >= -kRowSumSlack. Positive
/// definiteness is not checked here.
template <typename Scalar>
bool satisfies_signs(const MatrixX<Scalar>& theta, ConstraintSet cs) {
  const Eigen::Index p = theta.rows();
  for (Eigen::Index j = 0; j < p; ++j)
    for (Eigen::Index i = 0; i < p; ++i)
      if (i != j && theta(i, j) > Scalar(0)) return false;
  if (cs == ConstraintSet::DiagDomMMatrix) {
    if ((theta.rowwise().sum().array() < Scalar(-kRowSumSlack)).any())
      return false;
  }
  return true;
}

/// A precision matrix certified positive definite (the factor is kept) and
/// tagged with the constraint set it satisfies.
template <typename Scalar>
struct PrecisionEstimate {
  MatrixX<Scalar> theta;
  MatrixX<Scalar> chol_lower;  // theta = L L^T
  ConstraintSet constraint = ConstraintSet::MMatrix;

  Eigen::Index dim() const { return theta.rows(); }
};

/// Build a certified estimate, or absent when theta fails the Cholesky test
/// or the sign / row-sum constraints of the requested set.
template <typename Scalar>
std::optional<PrecisionEstimate<Scalar>> certify(const MatrixX<Scalar>& theta,
                                                 ConstraintSet cs) {
  if (!satisfies_signs(theta, cs)) return std::nullopt;
  auto chol = cholesky(theta);
  if (!chol) return std::nullopt;
  return PrecisionEstimate<Scalar>{theta, std::move(*chol), cs};
}

}  // namespace mtp2
