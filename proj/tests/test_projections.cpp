#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>

#include "mtp2/projections.hpp"
#include "oracles.hpp"

using Eigen::MatrixXd;
using Eigen::VectorXd;
using namespace mtp2;

namespace {

VectorXd vec3(double a, double b, double c) {
  VectorXd v(3);
  v << a, b, c;
  return v;
}

double rho_gap(const VectorXd& y, int r, double rho) {
  double g = rho + y[r];
  for (int i = 0; i < y.size(); ++i)
    if (i != r) g += std::min(y[i] + rho, 0.0);
  return g;
}

}  // namespace

TEST_CASE("project_nonpos_offdiag leaves feasible input and the diagonal") {
  MatrixXd a(2, 2);
  a << 1, -2, -2, 1;
  CHECK((project_nonpos_offdiag(a) - a).cwiseAbs().maxCoeff() == 0);

  MatrixXd b(2, 2);
  b << 1, 3, 3, 1;
  MatrixXd pb = project_nonpos_offdiag(b);
  CHECK(pb(0, 1) == 0);
  CHECK(pb(1, 0) == 0);
  CHECK(pb(0, 0) == 1);

  MatrixXd c(2, 2);
  c << -5, 0.5, 0.5, -5;
  MatrixXd pc = project_nonpos_offdiag(c);
  CHECK(pc(0, 0) == -5);  // diagonal untouched even when negative
  CHECK(pc(0, 1) == 0);
}

TEST_CASE("symmetrize basics") {
  MatrixXd s(2, 2);
  s << 1, -1, -1, 2;
  CHECK((symmetrize(s) - s).cwiseAbs().maxCoeff() == 0);

  MatrixXd a(2, 2);
  a << 0, 2, 0, 0;
  MatrixXd sa = symmetrize(a);
  CHECK(sa(0, 1) == 1);
  CHECK(sa(1, 0) == 1);

  MatrixXd b(2, 2);
  b << 1, 4, 2, 1;
  CHECK(symmetrize(b)(0, 1) == 3);
}

TEST_CASE("project_row_sc spec instances") {
  VectorXd a = project_row_sc<double>(vec3(5, -1, -3), 0);
  CHECK((a - vec3(5, -1, -3)).cwiseAbs().maxCoeff() == 0);

  VectorXd b = project_row_sc<double>(vec3(1, 2, -1), 0);
  CHECK((b - vec3(1, 0, -1)).cwiseAbs().maxCoeff() == 0);
  CHECK(b.sum() == 0);

  VectorXd c = project_row_sc<double>(vec3(1, -2, -3), 0);
  CHECK(c[0] == doctest::Approx(7.0 / 3).epsilon(1e-12));
  CHECK(c[1] == doctest::Approx(-2.0 / 3).epsilon(1e-12));
  CHECK(c[2] == doctest::Approx(-5.0 / 3).epsilon(1e-12));
  CHECK((c - oracle::project_row(vec3(1, -2, -3), 0)).norm() <= 1e-9);
}

TEST_CASE("find_rho sorted procedure") {
  VectorXd y = vec3(1, -2, -3);
  double rho = find_rho<double>(y, 0);
  CHECK(rho == doctest::Approx(4.0 / 3).epsilon(1e-14));
  CHECK(std::abs(rho_gap(y, 0, rho)) <= 1e-12);

  VectorXd y2(2);
  y2 << 0, -1;
  CHECK(find_rho<double>(y2, 0) == doctest::Approx(0.5).epsilon(1e-14));
  VectorXd x2 = project_row_sc<double>(y2, 0);
  CHECK(x2[0] == doctest::Approx(0.5));
  CHECK(x2[1] == doctest::Approx(-0.5));
  CHECK((x2 - oracle::project_row(y2, 0)).norm() <= 1e-9);

  // No m satisfies the strict inequality: every shifted entry clamps.
  VectorXd y3(2);
  y3 << -1, -1;
  CHECK(find_rho<double>(y3, 0) == doctest::Approx(1.0).epsilon(1e-14));
  VectorXd x3 = project_row_sc<double>(y3, 0);
  CHECK(x3.cwiseAbs().maxCoeff() == 0);
  CHECK((x3 - oracle::project_row(y3, 0)).norm() <= 1e-9);

  CHECK_THROWS_AS((void)find_rho<double>(vec3(5, -1, -3), 0),
                  std::invalid_argument);
}

TEST_CASE("project_sc spec instances") {
  MatrixXd feasible(2, 2);
  feasible << 1, -0.5, -0.5, 1;
  CHECK((project_sc(feasible) - feasible).cwiseAbs().maxCoeff() == 0);

  MatrixXd pos(2, 2);
  pos << 1, 0.5, 0.5, 1;
  CHECK((project_sc(pos) - MatrixXd::Identity(2, 2)).cwiseAbs().maxCoeff() ==
        0);

  MatrixXd mixed(2, 2);
  mixed << 1, -2, -3, 1;
  MatrixXd got = project_sc(mixed);
  VectorXd row0(2), row1(2);
  row0 << 1, -2;
  row1 << -3, 1;
  CHECK((got.row(0).transpose() - oracle::project_row(row0, 0)).norm() <=
        1e-9);
  CHECK((got.row(1).transpose() - oracle::project_row(row1, 1)).norm() <=
        1e-9);
}

TEST_CASE("dykstra fixed point returns in one cycle") {
  MatrixXd y(2, 2);
  y << 2, -1, -1, 2;
  DykstraState<double> state(y);
  dykstra_step(state);
  CHECK(state.gap == 0);
  CHECK((state.a - y).cwiseAbs().maxCoeff() == 0);
}

TEST_CASE("dykstra matches the QP oracle on the spec instances") {
  MatrixXd pos(2, 2);
  pos << 1, 0.5, 0.5, 1;
  CHECK((dykstra_sa_sc(pos, 1e-10) - MatrixXd::Identity(2, 2)).norm() <= 1e-8);

  MatrixXd asym(2, 2);
  asym << 0, -3, -1, 0;
  MatrixXd got = dykstra_sa_sc(asym, 1e-12);
  MatrixXd want = oracle::project_sa_sc(asym);
  CHECK((got - want).norm() <= 1e-6);
  // the 2x2 instance solves in closed form
  MatrixXd closed(2, 2);
  closed << 1, -1, -1, 1;
  CHECK((want - closed).norm() <= 1e-9);
}

TEST_CASE("dykstra error handling") {
  MatrixXd y(2, 2);
  y << 1, 0.5, 0.5, 1;
  CHECK_THROWS_AS((void)dykstra_sa_sc(y, -1.0), std::invalid_argument);
  MatrixXd hard(3, 3);
  hard << 1, 2, -3, 4, 1, -2, -1, -5, 2;
  CHECK_THROWS_AS((void)dykstra_sa_sc(hard, 1e-14, 2), std::runtime_error);
}

TEST_CASE("dykstra increments satisfy the recurrence") {
  mtp2::Rng rng(31);
  MatrixXd y = oracle::random_matrix(rng, 4, 4, 2.0);
  DykstraState<double> s(y);
  CHECK(s.q.cwiseAbs().maxCoeff() == 0);
  MatrixXd q_prev = s.q;
  for (int k = 0; k < 5; ++k) {
    MatrixXd a_prev = s.a, c_prev = s.c;
    dykstra_step(s);
    MatrixXd expected_q = s.a - s.c + q_prev;
    CHECK((s.q - expected_q).cwiseAbs().maxCoeff() <= 1e-15);
    CHECK(s.gap >= 0);
    q_prev = s.q;
  }
}

TEST_CASE("project_constraint dispatches by set") {
  MatrixXd x(2, 2);
  x << 1, 0.5, 0.5, 1;
  CHECK((project_constraint<double>(x, ConstraintSet::MMatrix, 1e-10) -
         project_nonpos_offdiag(x))
            .cwiseAbs()
            .maxCoeff() == 0);
  CHECK((project_constraint<double>(x, ConstraintSet::DiagDomMMatrix, 1e-10) -
         MatrixXd::Identity(2, 2))
            .norm() <= 1e-8);
  MatrixXd feasible(2, 2);
  feasible << 2, -1, -1, 3;
  CHECK((project_constraint<double>(feasible, ConstraintSet::DiagDomMMatrix,
                                    1e-10) -
         feasible)
            .norm() <= 1e-10);
}

TEST_CASE("single-set projections are nonexpansive") {
  mtp2::Rng rng(17);
  for (int trial = 0; trial < 50; ++trial) {
    int p = 2 + int(rng.below(5));
    MatrixXd x = oracle::random_matrix(rng, p, p, 3.0);
    MatrixXd y = oracle::random_matrix(rng, p, p, 3.0);
    CHECK((project_nonpos_offdiag(x) - project_nonpos_offdiag(y)).norm() <=
          (x - y).norm() + 1e-12);
    CHECK((symmetrize(x) - symmetrize(y)).norm() <= (x - y).norm() + 1e-12);
    CHECK((project_sc(x) - project_sc(y)).norm() <= (x - y).norm() + 1e-10);
  }
}

TEST_CASE("projections are idempotent") {
  mtp2::Rng rng(19);
  for (int trial = 0; trial < 30; ++trial) {
    int p = 2 + int(rng.below(5));
    MatrixXd x = oracle::random_matrix(rng, p, p, 3.0);
    MatrixXd pb = project_nonpos_offdiag(x);
    CHECK((project_nonpos_offdiag(pb) - pb).cwiseAbs().maxCoeff() == 0);
    MatrixXd pa = symmetrize(x);
    CHECK((symmetrize(pa) - pa).cwiseAbs().maxCoeff() == 0);
    MatrixXd pc = project_sc(x);
    CHECK((project_sc(pc) - pc).norm() <= 1e-10);
    MatrixXd pd = dykstra_sa_sc(x, 1e-12);
    CHECK((dykstra_sa_sc(pd, 1e-12) - pd).norm() <= 1e-10);
  }
}

TEST_CASE("row projection feasibility and root residual on random input") {
  mtp2::Rng rng(23);
  for (int trial = 0; trial < 300; ++trial) {
    int p = 1 + int(rng.below(8));
    VectorXd y(p);
    for (int i = 0; i < p; ++i) y[i] = 4 * rng.normal();
    int r = int(rng.below(std::uint64_t(p)));
    VectorXd x = project_row_sc(y, r);
    CHECK(x.sum() >= -1e-12);
    for (int i = 0; i < p; ++i)
      if (i != r) CHECK(x[i] <= 0);

    double clamped = 0;
    for (int i = 0; i < p; ++i)
      if (i != r) clamped += std::min(y[i], 0.0);
    if (y[r] + clamped < 0) {  // tight case: check the root certificate
      double rho = find_rho(y, r);
      CHECK(std::abs(rho_gap(y, r, rho)) <= 1e-12);
      CHECK(rho > 0);
      CHECK(rho <= y.cwiseAbs().maxCoeff() + 1e-12);
    }
    CHECK((x - oracle::project_row(y, r)).norm() <= 1e-8);
  }
}

TEST_CASE("dykstra agrees with the QP oracle on random instances") {
  mtp2::Rng rng(29);
  for (int trial = 0; trial < 60; ++trial) {
    int p = 2 + int(rng.below(5));
    MatrixXd y = oracle::random_matrix(rng, p, p, 2.0);
    MatrixXd got = dykstra_sa_sc(y, 1e-11);
    MatrixXd want = oracle::project_sa_sc(y);
    CHECK((got - want).norm() <= 1e-6);
  }
}
