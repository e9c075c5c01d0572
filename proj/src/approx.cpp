#include "polyapprox/approx.hpp"

#include <algorithm>
#include <cmath>

#include "polyapprox/convex_hull.hpp"
#include "polyapprox/lp.hpp"
#include "polyapprox/rng.hpp"
#include "polyapprox/shape.hpp"

namespace polyapprox {
namespace {

// Support oracle over a fixed polytope. Hausdorff refinement evaluates many
// thousands of directions on one P, so we enumerate its vertices once via
// polar duality (facets of conv{a_i / (b_i - <a_i, x0>)} correspond to
// vertices of P) and take maxima over vertices; LP remains the fallback.
class PolytopeSupportOracle {
 public:
  explicit PolytopeSupportOracle(const HPolytope& P) : p_(&P) {
    const int d = static_cast<int>(P.normals.cols());
    const int m = P.facets();
    Mat A(m, d + 1);
    A.leftCols(d) = P.normals;
    A.col(d) = Vec::Ones(m);
    Vec c = Vec::Zero(d + 1);
    c(d) = 1.0;
    LpResult inball = lp_maximize(A, P.offsets, c, 71);
    if (inball.status != LpStatus::Optimal || inball.x(d) <= 1e-9) return;
    Vec x0 = inball.x.head(d);

    std::vector<Vec> dual;
    dual.reserve(m);
    for (int i = 0; i < m; ++i) {
      double margin = P.offsets(i) - P.normals.row(i).dot(x0);
      if (margin <= 1e-12) return;
      dual.push_back(P.normals.row(i).transpose() / margin);
    }
    std::vector<std::pair<Vec, double>> planes;
    try {
      planes = hull_facet_planes(dual);
    } catch (const Error&) {
      return;
    }
    if (planes.empty()) return;
    verts_.reserve(planes.size());
    for (const auto& [n, off] : planes) {
      if (off <= 1e-12) return;  // origin not interior: bail to LP
      verts_.push_back(x0 + n / off);
    }
    ready_ = true;
  }

  double operator()(const Vec& u) const {
    if (!ready_) return polytope_support(*p_, u);
    double best = -1e300;
    for (const Vec& v : verts_) best = std::max(best, u.dot(v));
    return best;
  }

 private:
  const HPolytope* p_;
  std::vector<Vec> verts_;
  bool ready_ = false;
};

}  // namespace

HPolytope circumscribe(const ConvexBody& K, const std::vector<Vec>& normals) {
  if (normals.empty()) raise(ErrorCode::InvalidArgument, "circumscribe needs normals");
  const int d = K.dim();
  HPolytope P;
  P.normals.resize(normals.size(), d);
  P.offsets.resize(normals.size());
  for (size_t i = 0; i < normals.size(); ++i) {
    Vec u = normals[i];
    double n = u.norm();
    if (std::abs(n - 1.0) > 1e-9)
      raise(ErrorCode::InvalidArgument, "circumscribe needs unit normals");
    u /= n;
    P.normals.row(i) = u.transpose();
    P.offsets(i) = support_value(K, u);  // tangency by construction
  }
  // bounded iff the recession cone {u : <a_i, u> <= 0 for all i} is {0},
  // i.e. the normals positively span R^d
  Vec zero = Vec::Zero(P.facets());
  for (int j = 0; j < d; ++j) {
    for (double sgn : {1.0, -1.0}) {
      Vec c = Vec::Zero(d);
      c(j) = sgn;
      LpResult r = lp_maximize(P.normals, zero, c, 31 + j, /*bound=*/1.0);
      if (r.status != LpStatus::Optimal || r.value > 1e-7)
        raise(ErrorCode::UnboundedCircumscription,
              "normals do not positively span: unbounded recession direction");
    }
  }
  P.bounded = true;
  return P;
}

double polytope_support(const HPolytope& P, const Vec& u) {
  LpResult r = lp_maximize(P.normals, P.offsets, u, 17);
  if (r.status == LpStatus::Infeasible) raise(ErrorCode::Infeasible, "empty polytope");
  if (r.status == LpStatus::Unbounded) raise(ErrorCode::Unbounded, "unbounded support");
  return r.value;
}

HausdorffResult hausdorff_gap(const ConvexBody& K, const HPolytope& P, int coarse_dirs,
                              int refine_rounds, uint64_t seed) {
  const int d = K.dim();
  Rng rng(seed);

  PolytopeSupportOracle hp(P);
  auto gap = [&](const Vec& u) {
    double g = hp(u) - support_value(K, u);
    if (g < -1e-6)
      raise(ErrorCode::ContainmentViolation,
            "h_P(u) < h_K(u) - 1e-6: polytope does not contain the body");
    return g;
  };
  auto rand_dir = [&](Rng& r) {
    Vec u(d);
    double n = 0.0;
    do {
      for (int i = 0; i < d; ++i) u(i) = r.normal();
      n = u.norm();
    } while (n < 1e-12);
    return Vec(u / n);
  };

  const int keep = 32;
  std::vector<std::pair<double, Vec>> top;
  for (int i = 0; i < coarse_dirs; ++i) {
    Vec u = rand_dir(rng);
    double g = gap(u);
    if (static_cast<int>(top.size()) < keep) {
      top.emplace_back(g, u);
      std::sort(top.begin(), top.end(),
                [](const auto& a, const auto& b) { return a.first > b.first; });
    } else if (g > top.back().first) {
      top.back() = {g, u};
      std::sort(top.begin(), top.end(),
                [](const auto& a, const auto& b) { return a.first > b.first; });
    }
  }

  double best = top.empty() ? 0.0 : top.front().first;
  Vec best_u = top.empty() ? Vec::Unit(d, 0) : top.front().second;
  for (auto& [g0, u0] : top) {
    double sigma = 0.3;
    Vec u = u0;
    double g = g0;
    for (int round = 0; round < refine_rounds; ++round) {
      bool improved = false;
      for (int k = 0; k < 8; ++k) {
        Vec w = u;
        for (int i = 0; i < d; ++i) w(i) += sigma * rng.normal();
        w.normalize();
        double gw = gap(w);
        if (gw > g) {
          g = gw;
          u = w;
          improved = true;
        }
      }
      if (!improved) sigma *= 0.5;
    }
    if (g > best) {
      best = g;
      best_u = u;
    }
  }

  // residual-gap diagnostic: Lipschitz constant of h_P - h_K times a
  // coarse-sample covering-radius estimate (probabilistic, not a certificate)
  double radius = 0.0;
  {
    Vec lo, hi;
    bounding_box(K, 0.0, lo, hi);
    double rk = std::max(lo.cwiseAbs().maxCoeff(), hi.cwiseAbs().maxCoeff());
    double rp = 0.0;
    for (int j = 0; j < d; ++j) {
      rp = std::max(rp, std::abs(polytope_support(P, Vec::Unit(d, j))));
      rp = std::max(rp, std::abs(polytope_support(P, Vec(-Vec::Unit(d, j)))));
    }
    radius = std::sqrt(double(d)) * (rk + rp);
  }
  double covering =
      2.0 * std::pow(std::log(std::max(coarse_dirs, 2)) / std::max(coarse_dirs, 2), 1.0 / (d - 1));

  HausdorffResult out;
  out.lower_bound = best;
  out.estimate = best;
  out.gap_bound = radius * covering;
  out.argmax_dir = best_u;
  return out;
}

namespace {

ApproxResult approximate_core(const ConvexBody& K, double eps, const ApproxOptions& opts,
                              uint64_t seed) {
  if (!(eps > 0 && eps < 1)) raise(ErrorCode::InvalidArgument, "eps must lie in (0,1)");
  const int d = K.dim();
  Rng rng(seed);

  Estimate vd1 = opts.vd1_override ? *opts.vd1_override
                                   : outer_vd1(K, opts.samples, rng.derive(7).next_u64());
  const double c12bis = std::pow(3.0, (d - 1) / 4.0) * std::pow(4.0, d) / kappa(d - 1);

  ApproxResult res;
  res.seed = seed;
  res.eps_target = eps;
  res.vd1_outer = vd1.value;
  res.vd1_stderr = vd1.stderr_;
  res.bound_facets =
      c12bis * (vd1.value + 4.0 * vd1.stderr_) * std::pow(eps, -(d - 1) / 2.0);

  double delta = std::min(std::sqrt(eps / std::sqrt(3.0)), 0.99);
  if (opts.facet_budget > 0) {
    double area = 2.0 * vd1.value;
    delta = std::min(delta, std::pow(area / double(opts.facet_budget), 1.0 / (d - 1)));
  }

  BoundaryCloud cloud;
  cloud.dim = 0;  // built lazily
  auto ensure_cloud = [&](double for_delta) {
    double target = 0.98 * for_delta / 10.0;
    if (cloud.dim == 0) {
      cloud = make_boundary_cloud(K, target, opts.oversample, opts.max_candidates,
                                  rng.derive(11).next_u64());
    } else {
      densify_boundary_cloud(K, cloud, target);
    }
  };

  DeltaNet net;
  int budget_iters = 0;
  // phase A: facet-budget calibration (multiplicative delta correction)
  for (;;) {
    ensure_cloud(delta);
    net = body_net_from_cloud(K, cloud, delta, rng.derive(100 + budget_iters).next_u64());
    if (opts.facet_budget <= 0) break;
    long m = net.size();
    if (m > opts.facet_budget) {
      delta *= std::pow(double(m) / double(opts.facet_budget), 1.0 / (d - 1)) * 1.06;
      delta = std::min(delta, 0.99);
    } else if (m < 0.72 * double(opts.facet_budget) && delta > 1e-4) {
      delta *= std::pow(double(m) / (0.9 * double(opts.facet_budget)), 1.0 / (d - 1));
    } else {
      break;
    }
    if (++budget_iters >= 8) {
      // settle for the largest delta seen that respects the budget
      if (net.size() > opts.facet_budget) {
        delta *= std::pow(double(net.size()) / double(opts.facet_budget), 1.0 / (d - 1)) * 1.1;
        ensure_cloud(delta);
        net = body_net_from_cloud(K, cloud, delta, rng.derive(222).next_u64());
        if (net.size() > opts.facet_budget)
          raise(ErrorCode::RetryExhausted, "facet budget calibration failed");
      }
      break;
    }
  }

  // phase B: d_H guarantee loop
  for (int retry = 0;; ++retry) {
    std::vector<Vec> normals;
    normals.reserve(net.payload.size());
    for (const auto& p : net.payload) normals.push_back(p.normal);
    res.polytope = circumscribe(K, normals);
    res.facet_count = res.polytope.facets();
    res.delta_used = delta;
    res.retries = retry;

    HausdorffResult h = hausdorff_gap(K, res.polytope, opts.coarse_dirs, opts.refine_rounds,
                                      rng.derive(300 + retry).next_u64());
    res.d_h = h.estimate;
    res.d_h_gap_bound = h.gap_bound;
    if (res.d_h < eps) break;
    if (retry >= opts.max_retries)
      raise(ErrorCode::RetryExhausted,
            "d_H stayed above eps after " + std::to_string(retry) + " retries (d_H = " +
                std::to_string(res.d_h) + ", eps = " + std::to_string(eps) + ")");
    if (opts.facet_budget > 0)
      raise(ErrorCode::RetryExhausted,
            "facet budget and d_H < eps are jointly unattainable at this budget");
    delta *= 0.5;
    ensure_cloud(delta);
    net = body_net_from_cloud(K, cloud, delta, rng.derive(400 + retry).next_u64());
  }

  res.facet_bound_ok = res.facet_count <= res.bound_facets;
  res.c1 = res.d_h * std::pow(double(res.facet_count), 2.0 / (d - 1));
  if (opts.facet_budget > 0)
    res.c1_budget = res.d_h * std::pow(double(opts.facet_budget), 2.0 / (d - 1));
  return res;
}

}  // namespace

ApproxResult approximate_eps(const ConvexBody& K, double eps, const ApproxOptions& opts,
                             uint64_t seed) {
  return approximate_core(K, eps, opts, seed);
}

ApproxResult approximate_n(const ConvexBody& K, long n, const ApproxOptions& opts,
                           uint64_t seed) {
  const int d = K.dim();
  Rng rng(seed);
  Estimate vd1 = opts.vd1_override ? *opts.vd1_override
                                   : outer_vd1(K, opts.samples, rng.derive(7).next_u64());
  const double c12bis = std::pow(3.0, (d - 1) / 4.0) * std::pow(4.0, d) / kappa(d - 1);
  const double c13 = std::pow(c12bis, 2.0 / (d - 1));
  if (!(double(n) > c12bis * vd1.value))
    raise(ErrorCode::ThresholdNotMet,
          "need n > c12bis V_{d-1}(K+B) = " + std::to_string(c12bis * vd1.value));

  double eps = c13 * std::pow(vd1.value, 2.0 / (d - 1)) * std::pow(double(n), -2.0 / (d - 1));
  ApproxOptions o = opts;
  o.vd1_override = vd1;
  if (o.facet_budget <= 0) o.facet_budget = n;
  ApproxResult res = approximate_core(K, eps, o, seed);
  if (res.facet_count > n)
    raise(ErrorCode::RetryExhausted, "construction exceeded the facet budget");
  return res;
}

ApproxResult approximate_scaled(const ConvexBody& K, long n, const ApproxOptions& opts,
                                uint64_t seed) {
  const int d = K.dim();
  ConstantsTable C = constants(d);
  if (!(double(n) > C.c12bisbis))
    raise(ErrorCode::ThresholdNotMet,
          "need n > c12bisbis = " + std::to_string(C.c12bisbis));
  Rng rng(seed);

  auto V = intrinsic_volumes(K, opts.samples, rng.derive(1).next_u64());
  auto p = side_polynomial(V);
  ShapeEval se = shape_eval(p, V.v(1), double(n));
  double t_star = std::min(se.t_star, se.rho * (1.0 - 1e-9));

  ConvexBody scaled = ConvexBody::scaled(K, t_star);
  ApproxOptions o = opts;
  o.vd1_override = Estimate{eval_side(p, t_star), eval_side_stderr(p, t_star)};
  ApproxResult res = approximate_n(scaled, n, o, rng.derive(2).next_u64());

  // rescale the circumscribed polytope back: (a, b) -> (a, b / t*)
  res.polytope.offsets /= t_star;
  res.t_star = t_star;
  HausdorffResult h = hausdorff_gap(K, res.polytope, opts.coarse_dirs, opts.refine_rounds,
                                    rng.derive(3).next_u64());
  res.d_h = h.estimate;
  res.d_h_gap_bound = h.gap_bound;
  res.eps_target = res.eps_target / t_star;
  res.c1 = res.d_h * std::pow(double(res.facet_count), 2.0 / (d - 1));
  res.c1_budget = res.d_h * std::pow(double(n), 2.0 / (d - 1));
  res.scaled_bound = C.c13bis * se.g * V.v(1) * std::pow(double(n), -2.0 / (d - 1));
  res.scaled_bound_ok = res.d_h < res.scaled_bound;
  return res;
}

std::vector<SweepRow> c1_sweep(const ConvexBody& K, const std::vector<long>& n_values,
                               const ApproxOptions& opts, uint64_t seed) {
  std::vector<SweepRow> rows;
  Rng rng(seed);
  for (long n : n_values) {
    ApproxResult r = approximate_n(K, n, opts, rng.derive(n).next_u64());
    SweepRow row;
    row.n = n;
    row.c1 = r.c1_budget;
    row.d_h = r.d_h;
    row.facet_count = r.facet_count;
    rows.push_back(row);
  }
  // suffix maximum as the c1bis proxy over the swept range
  double run = 0.0;
  for (auto it = rows.rbegin(); it != rows.rend(); ++it) {
    run = std::max(run, it->c1);
    it->c1_suffix_max = run;
  }
  return rows;
}

}  // namespace polyapprox
