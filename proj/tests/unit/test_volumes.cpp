#include <doctest.h>

#include <cmath>

#include "polyapprox/bodies.hpp"
#include "polyapprox/volumes.hpp"

using namespace polyapprox;

namespace {

Vec v3(double a, double b, double c) {
  Vec v(3);
  v << a, b, c;
  return v;
}

ConvexBody box123() { return ConvexBody::box(Vec::Zero(3), v3(1, 2, 3)); }

}  // namespace

TEST_CASE("kappa and omega closed forms") {
  CHECK(kappa(0) == doctest::Approx(1.0));
  CHECK(kappa(1) == doctest::Approx(2.0));
  CHECK(kappa(2) == doctest::Approx(M_PI));
  CHECK(kappa(3) == doctest::Approx(4.0 * M_PI / 3.0));
  CHECK(omega(3) == doctest::Approx(4.0 * M_PI));
  CHECK_THROWS_AS(kappa(13), Error);
}

TEST_CASE("exact intrinsic volumes") {
  // V_j(B^d) = C(d,j) kappa_d / kappa_{d-j}; for d=3: (1, 4, 2pi, 4pi/3),
  // cross-check 2 V_2 = surface area 4pi
  auto vb = exact_intrinsic_volumes(ConvexBody::ball(3));
  CHECK(vb.v(0) == doctest::Approx(1.0));
  CHECK(vb.v(1) == doctest::Approx(4.0));
  CHECK(vb.v(2) == doctest::Approx(2.0 * M_PI));
  CHECK(vb.v(3) == doctest::Approx(4.0 * M_PI / 3.0));
  CHECK(2.0 * vb.v(2) == doctest::Approx(4.0 * M_PI));

  auto vbox = exact_intrinsic_volumes(box123());
  CHECK(vbox.v(1) == doctest::Approx(6.0));
  CHECK(vbox.v(2) == doctest::Approx(11.0));
  CHECK(vbox.v(3) == doctest::Approx(6.0));

  auto vseg = exact_intrinsic_volumes(ConvexBody::segment(v3(-1, 0, 0), v3(1, 0, 0)));
  CHECK(vseg.v(0) == doctest::Approx(1.0));
  CHECK(vseg.v(1) == doctest::Approx(2.0));
  CHECK(vseg.v(2) == doctest::Approx(0.0));
  CHECK(vseg.v(3) == doctest::Approx(0.0));

  // homogeneity V_j(tK) = t^j V_j(K)
  auto vs = exact_intrinsic_volumes(ConvexBody::scaled(box123(), 2.0));
  for (int j = 0; j <= 3; ++j) CHECK(vs.v(j) == doctest::Approx(std::pow(2.0, j) * vbox.v(j)));

  // capsule: segment L=2 plus unit ball, V_3 = 4pi/3 + 2pi
  auto vcap = exact_intrinsic_volumes(
      ConvexBody::ball_sum(ConvexBody::segment(v3(-1, 0, 0), v3(1, 0, 0)), 1.0));
  CHECK(vcap.v(3) == doctest::Approx(4.0 * M_PI / 3.0 + 2.0 * M_PI));
  // ball-sum of a ball is a bigger ball
  auto vbb = exact_intrinsic_volumes(ConvexBody::ball_sum(ConvexBody::ball(3), 1.0));
  auto v2b = exact_intrinsic_volumes(ConvexBody::ball(3, 2.0));
  for (int j = 0; j <= 3; ++j) CHECK(vbb.v(j) == doctest::Approx(v2b.v(j)));

  CHECK_THROWS_AS(exact_intrinsic_volumes(ConvexBody::ellipsoid(v3(1, 0.5, 0.25))), Error);
}

TEST_CASE("kubota estimator vs exact values") {
  auto ball = ConvexBody::ball(3);
  auto e1 = kubota_estimate(ball, 1, 2000, 1);
  CHECK(e1.value == doctest::Approx(4.0).epsilon(1e-12));  // constant shadow
  CHECK(e1.stderr_ == doctest::Approx(0.0));

  auto box = box123();
  auto e2 = kubota_estimate(box, 2, 100000, 2);
  CHECK(std::abs(e2.value - 11.0) < 4.0 * e2.stderr_);
  CHECK(e2.stderr_ < 0.02 * 11.0);
  auto e3 = kubota_estimate(box, 1, 100000, 3);
  CHECK(std::abs(e3.value - 6.0) < 4.0 * e3.stderr_);

  // segment at k=1 uses the closed-form expectation
  auto seg = ConvexBody::segment(v3(-1, 0, 0), v3(1, 0, 0));
  auto es = kubota_estimate(seg, 1, 10, 4);
  CHECK(es.value == doctest::Approx(2.0));
  CHECK(es.stderr_ == doctest::Approx(0.0));

  // ellipsoid oracle in d=2: V_1 = perimeter / 2, perimeter by quadrature
  Vec ax(2);
  ax << 1.0, 0.3;
  auto ell = ConvexBody::ellipsoid(ax);
  int n = 200000;
  double per = 0.0;
  for (int i = 0; i < n; ++i) {
    double t0 = 2.0 * M_PI * i / n, t1 = 2.0 * M_PI * (i + 1) / n;
    double x0 = std::cos(t0), y0 = 0.3 * std::sin(t0);
    double x1 = std::cos(t1), y1 = 0.3 * std::sin(t1);
    per += std::hypot(x1 - x0, y1 - y0);
  }
  auto ek = kubota_estimate(ell, 1, 100000, 5);
  CHECK(std::abs(ek.value - per / 2.0) < 4.0 * ek.stderr_);

  // H-polytope: unit cube as halfspaces reproduces the box values
  Mat A(6, 3);
  Vec b(6);
  A.setZero();
  for (int i = 0; i < 3; ++i) {
    A(2 * i, i) = 1.0;
    b(2 * i) = 1.0;
    A(2 * i + 1, i) = -1.0;
    b(2 * i + 1) = 0.0;
  }
  auto cube = ConvexBody::hpolytope(A, b);
  auto eh = kubota_estimate(cube, 2, 4000, 6);
  CHECK(std::abs(eh.value - 3.0) < 4.0 * eh.stderr_);  // e_2(1,1,1) = 3
  auto ivh = intrinsic_volumes(cube, 4000, 7);
  CHECK(ivh.v(3) == doctest::Approx(1.0).epsilon(1e-9));  // hull volume exact
}

TEST_CASE("isoperimetric ratios") {
  // ball in d=4: V_1 = 3pi/2, V_2 = 3pi, ratio = sqrt(3pi)/(3pi/2)
  auto b4 = exact_intrinsic_volumes(ConvexBody::ball(4));
  CHECK(b4.v(1) == doctest::Approx(1.5 * M_PI));
  CHECK(b4.v(2) == doctest::Approx(3.0 * M_PI));
  double r = isoperimetric_ratio(b4, 1, 2);
  CHECK(r == doctest::Approx(std::sqrt(3.0 * M_PI) / (1.5 * M_PI)));
  CHECK(r == doctest::Approx(0.6515).epsilon(1e-4));

  // scale invariance is exact for exact bodies
  auto scaled = exact_intrinsic_volumes(ConvexBody::scaled(ConvexBody::ball(4), 3.7));
  CHECK(isoperimetric_ratio(scaled, 1, 2) == doctest::Approx(r).epsilon(1e-14));

  auto seg = exact_intrinsic_volumes(ConvexBody::segment(v3(-1, 0, 0), v3(1, 0, 0)));
  CHECK(isoperimetric_ratio(seg, 1, 2) == doctest::Approx(0.0));

  // isoperimetric inequality: ratios are maximized by balls, strictly for
  // non-balls (eq. holds for balls of any radius)
  double ball_ratio = isoperimetric_ratio(exact_intrinsic_volumes(ConvexBody::ball(3)), 1, 2);
  CHECK(isoperimetric_ratio(exact_intrinsic_volumes(ConvexBody::ball(3, 0.37)), 1, 2) ==
        doctest::Approx(ball_ratio).epsilon(1e-12));
  for (const auto& K : {box123(), ConvexBody::ball_sum(ConvexBody::segment(v3(-1, 0, 0), v3(1, 0, 0)), 0.5)}) {
    CHECK(isoperimetric_ratio(exact_intrinsic_volumes(K), 1, 2) < ball_ratio - 1e-9);
  }
  CHECK(isoperimetric_ratio(ConvexBody::ellipsoid(v3(1, 0.5, 0.25)), 1, 2, 20000, 1) <
        ball_ratio - 1e-9);
}

TEST_CASE("side polynomial") {
  // B^3: coefficients (2pi, 4pi, 2pi), p(1) = 8pi = V_2(2 B^3)
  auto p = side_polynomial(exact_intrinsic_volumes(ConvexBody::ball(3)));
  CHECK(p.coeffs(0) == doctest::Approx(2.0 * M_PI));
  CHECK(p.coeffs(1) == doctest::Approx(4.0 * M_PI));
  CHECK(p.coeffs(2) == doctest::Approx(2.0 * M_PI));
  CHECK(eval_side(p, 1.0) == doctest::Approx(8.0 * M_PI));
  CHECK(eval_side(p, 1.0) ==
        doctest::Approx(4.0 * exact_intrinsic_volumes(ConvexBody::ball(3)).v(2)));

  // segment L=2 in d=3: p(t) = 2pi + 2pi t
  auto ps = side_polynomial(
      exact_intrinsic_volumes(ConvexBody::segment(v3(-1, 0, 0), v3(1, 0, 0))));
  CHECK(ps.coeffs(0) == doctest::Approx(2.0 * M_PI));
  CHECK(ps.coeffs(1) == doctest::Approx(2.0 * M_PI));
  CHECK(ps.coeffs(2) == doctest::Approx(0.0));

  // point-like vector: p(t) = d kappa_d / 2 = V_{d-1}(B^d) for all t
  IntrinsicVolumeVector pt;
  pt.dim = 3;
  pt.values = Vec::Zero(4);
  pt.values(0) = 1.0;
  pt.stderrs = Vec::Zero(4);
  pt.exact.assign(4, true);
  auto pp = side_polynomial(pt);
  CHECK(eval_side(pp, 0.1) == doctest::Approx(2.0 * M_PI));
  CHECK(eval_side(pp, 7.0) == doctest::Approx(2.0 * M_PI));
  CHECK(eval_side(pp, 1.0) == doctest::Approx(exact_intrinsic_volumes(ConvexBody::ball(3)).v(2)));
}

TEST_CASE("parallel volume monte carlo vs Steiner") {
  // ball: K + B = 2B, volume 32pi/3
  auto mc = mc_parallel_volume(ConvexBody::ball(3), 1.0, 200000, 11);
  CHECK(std::abs(mc.value - 32.0 * M_PI / 3.0) < 4.0 * mc.stderr_);

  // unit cube + B: 1 + 6 + 3pi + 4pi/3
  auto mcc = mc_parallel_volume(ConvexBody::unit_cube(3), 1.0, 200000, 12);
  CHECK(std::abs(mcc.value - (7.0 + 3.0 * M_PI + 4.0 * M_PI / 3.0)) < 4.0 * mcc.stderr_);

  // capsule
  auto mcs = mc_parallel_volume(ConvexBody::segment(v3(-1, 0, 0), v3(1, 0, 0)), 1.0, 200000, 13);
  CHECK(std::abs(mcs.value - (4.0 * M_PI / 3.0 + 2.0 * M_PI)) < 4.0 * mcs.stderr_);

  CHECK_THROWS_AS(mc_parallel_volume(ConvexBody::ball(3), 1.0, 100, 1), Error);

  // Steiner consistency across eps for an exact body
  auto V = exact_intrinsic_volumes(box123());
  for (double eps : {0.25, 1.0, 2.0}) {
    double steiner = 0.0;
    for (int j = 0; j <= 3; ++j) steiner += std::pow(eps, 3 - j) * kappa(3 - j) * V.v(j);
    auto est = mc_parallel_volume(box123(), eps, 150000, 40 + int(eps * 8));
    CHECK(std::abs(est.value - steiner) < 4.0 * est.stderr_);
  }
}

TEST_CASE("box volumes validated by a Monte-Carlo Steiner fit") {
  // fit V_1..V_3 of box(1,2,3) from parallel volumes at three eps values
  // (V_0 = 1 pinned), then compare against the elementary-symmetric values
  auto K = box123();
  std::vector<double> eps = {0.3, 0.8, 1.5};
  Mat A(3, 3);
  Vec rhs(3), se(3);
  for (int r = 0; r < 3; ++r) {
    auto est = mc_parallel_volume(K, eps[r], 400000, 100 + r);
    rhs(r) = est.value - std::pow(eps[r], 3) * kappa(3);  // subtract the V_0 term
    se(r) = est.stderr_;
    for (int j = 1; j <= 3; ++j) A(r, j - 1) = std::pow(eps[r], 3 - j) * kappa(3 - j);
  }
  Vec fitted = A.fullPivLu().solve(rhs);
  Mat Ainv = A.inverse();
  for (int j = 1; j <= 3; ++j) {
    double sigma = 0.0;
    for (int r = 0; r < 3; ++r) sigma += Ainv(j - 1, r) * Ainv(j - 1, r) * se(r) * se(r);
    sigma = std::sqrt(sigma);
    double expect = j == 1 ? 6.0 : (j == 2 ? 11.0 : 6.0);
    CHECK(std::abs(fitted(j - 1) - expect) < std::max(4.0 * sigma, 0.02 * expect));
  }
}

TEST_CASE("shell surface estimate matches the side polynomial") {
  // eval_side(p_K, 1) = V_2(K + B) = H^2(boundary)/2
  for (const auto& K : {ConvexBody::ball(3), ConvexBody::unit_cube(3)}) {
    auto p = side_polynomial(exact_intrinsic_volumes(K));
    auto sh = shell_surface_mc(K, 1.0, 0.02, 400000, 21);
    CHECK(std::abs(eval_side(p, 1.0) - sh.value / 2.0) < 4.0 * (sh.stderr_ / 2.0) + 1e-3);
  }
}

TEST_CASE("sandwich inequality at equal mean width (d=3)") {
  // rescale I, K, B to V_1 = 1 and compare V_2(. + B) = p(1)
  auto norm1 = [](ConvexBody K) {
    double v1 = exact_intrinsic_volumes(K).v(1);
    return ConvexBody::scaled(std::move(K), 1.0 / v1);
  };
  auto I = norm1(ConvexBody::segment(v3(-1, 0, 0), v3(1, 0, 0)));
  auto B = norm1(ConvexBody::ball(3));
  auto K = norm1(box123());
  double pi1 = eval_side(side_polynomial(exact_intrinsic_volumes(I)), 1.0);
  double pk1 = eval_side(side_polynomial(exact_intrinsic_volumes(K)), 1.0);
  double pb1 = eval_side(side_polynomial(exact_intrinsic_volumes(B)), 1.0);
  CHECK(pi1 < pk1);
  CHECK(pk1 < pb1);

  // ellipsoid via the Kubota route sits strictly between as well
  Vec ax(3);
  ax << 1.0, 0.55, 0.4;
  auto E = ConvexBody::ellipsoid(ax);
  auto ve = intrinsic_volumes(E, 100000, 5);
  double v1 = ve.v(1);
  IntrinsicVolumeVector vn = ve;
  for (int j = 0; j <= 3; ++j) {
    vn.values(j) = ve.values(j) / std::pow(v1, j);
    vn.stderrs(j) = ve.stderrs(j) / std::pow(v1, j);
  }
  double pe1 = eval_side(side_polynomial(vn), 1.0);
  CHECK(pi1 < pe1);
  CHECK(pe1 < pb1);
}

TEST_CASE("kubota homogeneity within monte-carlo error") {
  Vec ax(3);
  ax << 1.0, 0.5, 0.25;
  auto E = ConvexBody::ellipsoid(ax);
  auto E2 = ConvexBody::scaled(E, 2.0);
  auto a = kubota_estimate(E, 2, 60000, 9);
  auto b = kubota_estimate(E2, 2, 60000, 10);
  double se = std::sqrt(4.0 * 4.0 * a.stderr_ * a.stderr_ + b.stderr_ * b.stderr_);
  CHECK(std::abs(b.value - 4.0 * a.value) < 4.0 * se);
}
