#include <doctest.h>

#include <cmath>

#include "polyapprox/bodies.hpp"
#include "polyapprox/net.hpp"
#include "polyapprox/rng.hpp"
#include "polyapprox/volumes.hpp"

using namespace polyapprox;

namespace {

Vec v3(double a, double b, double c) {
  Vec v(3);
  v << a, b, c;
  return v;
}

double euclid(const Vec& a, const Vec& b) { return (a - b).norm(); }

}  // namespace

TEST_CASE("greedy net: basics") {
  // three collinear points at consecutive distance 1, delta = 0.5: all kept
  SampledMetricSpace space;
  for (int i = 0; i < 3; ++i) space.points.push_back(v3(i, 0, 0));
  space.metric = euclid;
  space.density_radius = 0.0;
  auto net = greedy_net(space, 0.5, 1);
  CHECK(net.size() == 3);
  CHECK(net.cert.packing_ok);
  CHECK(net.cert.covering_ok);

  // delta larger than the diameter: one survivor
  auto net1 = greedy_net(space, 10.0, 1);
  CHECK(net1.size() == 1);

  // density precondition
  space.density_radius = 0.2;
  CHECK_THROWS_AS(greedy_net(space, 0.5, 1), Error);
}

TEST_CASE("greedy net: circle at delta = 0.5") {
  // Oracle bounds for a maximal 0.5-separated subset of the unit circle:
  // pairwise arcs exceed 2 asin(0.25) = 0.5054, so |S| <= floor(2pi/0.5054)
  // = 12; maximality covers the circle with arcs of half-width 0.5054, so
  // |S| >= ceil(2pi/(2*0.5054)) = 7. Random-order greedy jams near 0.75 of
  // the packing bound (parking constant), i.e. typically 9-10.
  const double theta = 2.0 * std::asin(0.25);
  const int max_pack = static_cast<int>(2.0 * M_PI / theta);
  const int min_cover = static_cast<int>(std::ceil(2.0 * M_PI / (2.0 * theta)));
  CHECK(max_pack == 12);
  CHECK(min_cover == 7);

  Rng rng(5);
  SampledMetricSpace space;
  double max_gap = 0.0;
  {
    std::vector<double> ang(2000);
    for (auto& a : ang) a = rng.uniform(0.0, 2.0 * M_PI);
    std::sort(ang.begin(), ang.end());
    for (size_t i = 0; i < ang.size(); ++i) {
      double nxt = i + 1 < ang.size() ? ang[i + 1] : ang[0] + 2.0 * M_PI;
      max_gap = std::max(max_gap, nxt - ang[i]);
      Vec p(2);
      p << std::cos(ang[i]), std::sin(ang[i]);
      space.points.push_back(p);
    }
  }
  space.metric = euclid;
  space.density_radius = max_gap / 2.0;
  REQUIRE(space.density_radius <= 0.05);

  for (uint64_t seed : {1, 2, 3}) {
    auto net = greedy_net(space, 0.5, seed);
    CHECK(net.size() >= min_cover);
    CHECK(net.size() <= max_pack);
    CHECK(net.cert.min_pairwise > 0.5);
    CHECK(net.cert.covering_radius <= 0.5);
  }

  // determinism: identical seeds give bit-identical center lists
  auto a = greedy_net(space, 0.5, 7);
  auto b = greedy_net(space, 0.5, 7);
  REQUIRE(a.size() == b.size());
  for (int i = 0; i < a.size(); ++i) CHECK((a.centers[i] - b.centers[i]).norm() == 0.0);
}

TEST_CASE("greedy net: metric spot-check rejects a broken metric") {
  SampledMetricSpace space;
  for (int i = 0; i < 50; ++i) space.points.push_back(v3(i * 0.1, 0, 0));
  space.metric = [](const Vec& a, const Vec& b) { return a(0) - b(0); };  // signed
  space.density_radius = 0.0;
  CHECK_THROWS_AS(greedy_net(space, 0.05, 1), Error);
}

TEST_CASE("packing count bounds") {
  // circle with arc-length measure: psi = 2pi, arcs as balls give c = c' = 2
  auto [lo, hi] = packing_count_bounds(2.0 * M_PI, 2.0, 2.0, 1.0, 0.1);
  CHECK(lo == doctest::Approx(M_PI / 0.1));
  CHECK(hi == doctest::Approx(2.0 * M_PI / 0.1));

  // doubling delta halves both bounds at k = 1
  auto [lo2, hi2] = packing_count_bounds(2.0 * M_PI, 2.0, 2.0, 1.0, 0.2);
  CHECK(lo2 == doctest::Approx(lo / 2.0));
  CHECK(hi2 == doctest::Approx(hi / 2.0));

  // a greedy net of the arc-length-metric circle lands inside the bounds
  SampledMetricSpace space;
  const int n = 5000;
  for (int i = 0; i < n; ++i) {
    Vec p(2);
    p << std::cos(2.0 * M_PI * i / n), std::sin(2.0 * M_PI * i / n);
    space.points.push_back(p);
  }
  space.metric = [](const Vec& a, const Vec& b) {
    double ta = std::atan2(a(1), a(0)), tb = std::atan2(b(1), b(0));
    double diff = std::abs(ta - tb);
    return std::min(diff, 2.0 * M_PI - diff);
  };
  space.density_radius = M_PI / n;
  auto net = greedy_net(space, 0.1, 3);
  CHECK(net.size() > lo);
  CHECK(net.size() < hi);

  CHECK_THROWS_AS(packing_count_bounds(-1.0, 2.0, 2.0, 1.0, 0.1), Error);
}

TEST_CASE("boundary net on the ball obeys the cardinality bounds") {
  auto ball = ConvexBody::ball(3);
  auto net = boundary_net(ball, 0.5, 0, 42);
  // D = 2 B^3, V_2(D) = 8 pi; bounds (c12min, c12) * 8pi * delta^-2
  const double v2 = 8.0 * M_PI;
  const double lo = 2.0 / (3.0 * kappa(2)) * v2 * 4.0;
  const double hi = std::pow(4.0, 3) / kappa(2) * v2 * 4.0;
  CHECK(lo == doctest::Approx(21.33).epsilon(1e-3));
  CHECK(hi == doctest::Approx(2047.6).epsilon(1e-3));
  CHECK(net.size() > lo);
  CHECK(net.size() < hi);
  CHECK(net.cert.packing_ok);
  CHECK(net.cert.covering_ok);
  CHECK(net.cert.covering_radius <= 0.5);

  auto rep = verify_net_cardinality(net, ball, 50000, 9);
  CHECK(rep.pass);
  CHECK(rep.vd1 == doctest::Approx(v2).epsilon(1e-9));

  // halving delta multiplies the count by something in (2, 8)
  auto net2 = boundary_net(ball, 0.25, 0, 42);
  double factor = double(net2.size()) / double(net.size());
  CHECK(factor > 2.0);
  CHECK(factor < 8.0);

  // determinism, same seed bit-for-bit
  auto again = boundary_net(ball, 0.5, 0, 42);
  REQUIRE(again.size() == net.size());
  for (int i = 0; i < net.size(); ++i)
    CHECK((again.centers[i] - net.centers[i]).norm() == 0.0);
}

TEST_CASE("boundary net on a tiny segment is a near-sphere net") {
  auto seg = ConvexBody::segment(v3(-0.05, 0, 0), v3(0.05, 0, 0));
  auto net = boundary_net(seg, 0.9, 0, 7);
  CHECK(net.size() >= 4);  // a 0.9-packing of a unit-ish sphere has at least 4 points
  auto rep = verify_net_cardinality(net, seg, 50000, 11);
  CHECK(rep.pass);
}

TEST_CASE("body net: projection contracts and certificates hold") {
  auto ball = ConvexBody::ball(3);
  auto net = body_net(ball, 0.4, 0, 21);
  CHECK(net.size() > 0);
  CHECK(net.cert.packing_ok);
  CHECK(net.cert.covering_ok);
  CHECK(net.metric_tag == MetricTag::Mixed);

  // for the unit ball the foot is x/2 and equals the normal
  for (const auto& p : net.payload) {
    CHECK((p.foot - p.x / 2.0).norm() < 1e-9);
    CHECK((p.normal - p.foot).norm() < 1e-9);
  }

  // 1-Lipschitz projection and normal map, asserted numerically on all pairs
  for (size_t i = 0; i < net.payload.size(); ++i)
    for (size_t j = i + 1; j < net.payload.size(); ++j) {
      double dx = (net.payload[i].x - net.payload[j].x).norm();
      CHECK((net.payload[i].foot - net.payload[j].foot).norm() <= dx + 1e-9);
      CHECK((net.payload[i].normal - net.payload[j].normal).norm() <= dx + 1e-9);
    }

  // Lemma 3.5 cardinality certificate
  const double c12 = std::pow(4.0, 3) / kappa(2);
  CHECK(net.size() < c12 * 8.0 * M_PI * std::pow(0.4, -2));
}

TEST_CASE("body net on the cube: normals 2delta-cover the sphere") {
  auto cube = ConvexBody::unit_cube(3);
  const double delta = 0.4;
  auto net = body_net(cube, delta, 0, 5);
  auto dirs = sample_unit_directions(3, 500, 99);
  double cover = 0.0;
  for (const auto& u : dirs) {
    double best = 1e9;
    for (const auto& p : net.payload) best = std::min(best, (u - p.normal).norm());
    cover = std::max(cover, best);
  }
  CHECK(cover <= 2.0 * delta);
}

TEST_CASE("cap areas by shell monte carlo") {
  auto ball = ConvexBody::ball(3);
  // a cap with radius beyond the diameter is the whole boundary: 16 pi
  auto center = outer_boundary_sample(ball, 1.0, v3(1, 0, 0));
  auto full = cap_area_shell_mc(ball, center, 4.5, 0.05, 400000, 3);
  CHECK(std::abs(full.value - 16.0 * M_PI) < 4.0 * full.stderr_ + 0.05 * 16.0 * M_PI);

  // vanishing cap with a fixed budget starves the estimator
  CHECK_THROWS_AS(cap_area_shell_mc(ball, center, 1e-3, 1e-4, 20000, 4), Error);

  // windowed and global estimates agree on a mid-size cap
  auto est_g = cap_area_shell_mc(ball, center, 0.5, 0.025, 400000, 5);
  auto est_w =
      cap_area_shell_mc(ball, center, 0.5, 0.025, 200000, 6, {.local_window = true});
  double se = std::sqrt(est_g.stderr_ * est_g.stderr_ + est_w.stderr_ * est_w.stderr_);
  CHECK(std::abs(est_g.value - est_w.value) < 4.0 * se + 0.02);

  // exact spherical-cap oracle: chord delta on the radius-2 sphere subtends
  // angle 2 asin(delta/4); area = 2 pi R^2 (1 - cos)
  double thetac = 2.0 * std::asin(0.5 / 4.0);
  double exact = 2.0 * M_PI * 4.0 * (1.0 - std::cos(thetac));
  CHECK(std::abs(est_w.value - exact) < 4.0 * est_w.stderr_ + 0.03 * exact);
}

TEST_CASE("cap bounds hold across bodies (quick slice)") {
  std::vector<ConvexBody> bodies;
  bodies.push_back(ConvexBody::ball(3));
  bodies.push_back(ConvexBody::segment(v3(-0.05, 0, 0), v3(0.05, 0, 0)));
  for (const auto& K : bodies) {
    auto rep = verify_cap_bounds(K, {0.5}, 8, 60000, 17);
    CHECK(rep.all_pass);
    for (const auto& row : rep.rows) {
      CHECK(row.lower == doctest::Approx(0.25 * kappa(2) * 0.25));
      CHECK(row.upper == doctest::Approx(0.25 * kappa(2) * 3.0));
    }
  }
}

TEST_CASE("cardinality bound violation raises") {
  auto ball = ConvexBody::ball(3);
  auto net = boundary_net(ball, 0.5, 0, 1);
  DeltaNet fake = net;
  fake.centers.resize(1);
  fake.payload.resize(1);
  CHECK_THROWS_AS(verify_net_cardinality(fake, ball, 20000, 3), Error);
}
