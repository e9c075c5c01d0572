#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>

#include "polyapprox/lp.hpp"
#include "polyapprox/rng.hpp"

using namespace polyapprox;

namespace {

// halfspace rows of the cube [-1,1]^d
std::pair<Eigen::MatrixXd, Eigen::VectorXd> cube(int d) {
  Eigen::MatrixXd A(2 * d, d);
  Eigen::VectorXd b = Eigen::VectorXd::Ones(2 * d);
  A.setZero();
  for (int i = 0; i < d; ++i) {
    A(2 * i, i) = 1.0;
    A(2 * i + 1, i) = -1.0;
  }
  return {A, b};
}

}  // namespace

TEST_CASE("lp: cube corners and faces") {
  auto [A, b] = cube(3);
  Eigen::VectorXd u(3);
  u << 1, 1, 1;
  u /= std::sqrt(3.0);
  LpResult r = lp_maximize(A, b, u);
  REQUIRE(r.status == LpStatus::Optimal);
  CHECK(r.value == doctest::Approx(std::sqrt(3.0)).epsilon(1e-9));

  u << 1, 0, 0;
  r = lp_maximize(A, b, u);
  REQUIRE(r.status == LpStatus::Optimal);
  CHECK(r.value == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("lp: infeasible and unbounded detection") {
  Eigen::MatrixXd A(2, 2);
  Eigen::VectorXd b(2);
  A << 1, 0, -1, 0;
  b << -1, -2;  // x <= -1 and x >= 2
  Eigen::VectorXd c(2);
  c << 1, 0;
  CHECK(lp_maximize(A, b, c).status == LpStatus::Infeasible);

  Eigen::MatrixXd A1(1, 2);
  Eigen::VectorXd b1(1);
  A1 << 1, 0;
  b1 << 1;
  Eigen::VectorXd cy(2);
  cy << 0, 1;
  CHECK(lp_maximize(A1, b1, cy).status == LpStatus::Unbounded);
}

TEST_CASE("lp: rotated cube support matches closed form") {
  // support of R [-1,1]^3 at u is ||R^T u||_1
  Rng rng(42);
  for (int trial = 0; trial < 20; ++trial) {
    Eigen::MatrixXd G(3, 3);
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) G(i, j) = rng.normal();
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(G);
    Eigen::MatrixXd R = qr.householderQ();

    Eigen::MatrixXd A(6, 3);
    Eigen::VectorXd b = Eigen::VectorXd::Ones(6);
    for (int i = 0; i < 3; ++i) {
      A.row(2 * i) = R.col(i).transpose();
      A.row(2 * i + 1) = -R.col(i).transpose();
    }
    for (int k = 0; k < 5; ++k) {
      Eigen::VectorXd u(3);
      for (int j = 0; j < 3; ++j) u(j) = rng.normal();
      u.normalize();
      LpResult r = lp_maximize(A, b, u, trial * 5 + k);
      REQUIRE(r.status == LpStatus::Optimal);
      double expect = (R.transpose() * u).cwiseAbs().sum();
      CHECK(r.value == doctest::Approx(expect).epsilon(1e-8));
    }
  }
}

TEST_CASE("lp: many redundant constraints") {
  // unit disc approximated by 2000 tangent halfspaces; support ~ 1 everywhere
  int m = 2000;
  Eigen::MatrixXd A(m, 2);
  Eigen::VectorXd b = Eigen::VectorXd::Ones(m);
  for (int i = 0; i < m; ++i) {
    double t = 2.0 * M_PI * i / m;
    A(i, 0) = std::cos(t);
    A(i, 1) = std::sin(t);
  }
  Eigen::VectorXd u(2);
  u << 0.6, 0.8;
  LpResult r = lp_maximize(A, b, u);
  REQUIRE(r.status == LpStatus::Optimal);
  CHECK(r.value == doctest::Approx(1.0).epsilon(1e-5));
}
