#include "polyapprox/volumes.hpp"

#include <algorithm>
#include <cmath>

#include "polyapprox/convex_hull.hpp"
#include "polyapprox/rng.hpp"

namespace polyapprox {

double kappa(int n) {
  if (n < 0 || n > 12) raise(ErrorCode::InvalidArgument, "kappa defined for n in 0..12");
  return std::pow(M_PI, n / 2.0) / std::tgamma(n / 2.0 + 1.0);
}

double omega(int n) {
  if (n < 1 || n > 12) raise(ErrorCode::InvalidArgument, "omega defined for n in 1..12");
  return n * kappa(n);
}

double binomial(int n, int k) {
  if (k < 0 || k > n) return 0.0;
  double r = 1.0;
  for (int i = 0; i < k; ++i) r *= double(n - i) / double(i + 1);
  return r;
}

bool IntrinsicVolumeVector::all_exact() const {
  return std::all_of(exact.begin(), exact.end(), [](bool e) { return e; });
}

namespace {

IntrinsicVolumeVector make_exact(int d, const Vec& vals) {
  IntrinsicVolumeVector out;
  out.dim = d;
  out.values = vals;
  out.stderrs = Vec::Zero(d + 1);
  out.exact.assign(d + 1, true);
  return out;
}

Vec ball_values(int d, double r) {
  Vec v(d + 1);
  for (int j = 0; j <= d; ++j) v(j) = binomial(d, j) * kappa(d) / kappa(d - j) * std::pow(r, j);
  return v;
}

Vec box_values(int d, const Vec& sides) {
  // elementary symmetric polynomials e_k(sides)
  Vec e = Vec::Zero(d + 1);
  e(0) = 1.0;
  for (int i = 0; i < d; ++i)
    for (int k = std::min(i + 1, d); k >= 1; --k) e(k) += sides(i) * e(k - 1);
  return e;
}

// V_j(K + r B^d) = sum_{k<=j} C(d-k, d-j) (kappa_{d-k}/kappa_{d-j}) r^{j-k} V_k(K)
IntrinsicVolumeVector ball_sum_values(const IntrinsicVolumeVector& inner, double r) {
  const int d = inner.dim;
  IntrinsicVolumeVector out;
  out.dim = d;
  out.values = Vec::Zero(d + 1);
  out.stderrs = Vec::Zero(d + 1);
  out.exact.assign(d + 1, true);
  for (int j = 0; j <= d; ++j) {
    double var = 0.0;
    for (int k = 0; k <= j; ++k) {
      double coef = binomial(d - k, d - j) * kappa(d - k) / kappa(d - j) * std::pow(r, j - k);
      out.values(j) += coef * inner.values(k);
      var += coef * coef * inner.stderrs(k) * inner.stderrs(k);
      if (!inner.exact[k]) out.exact[j] = false;
    }
    out.stderrs(j) = std::sqrt(var);
  }
  return out;
}

IntrinsicVolumeVector scaled_values(const IntrinsicVolumeVector& inner, double t) {
  IntrinsicVolumeVector out = inner;
  for (int j = 0; j <= inner.dim; ++j) {
    out.values(j) *= std::pow(t, j);
    out.stderrs(j) *= std::pow(t, j);
  }
  return out;
}

}  // namespace

IntrinsicVolumeVector exact_intrinsic_volumes(const ConvexBody& K) {
  const int d = K.dim();
  if (auto* b = K.get_if<BallSpec>()) return make_exact(d, ball_values(d, b->radius));
  if (auto* b = K.get_if<BoxSpec>()) return make_exact(d, box_values(d, b->sides));
  if (auto* s = K.get_if<SegmentSpec>()) {
    Vec v = Vec::Zero(d + 1);
    v(0) = 1.0;
    v(1) = (s->a - s->b).norm();
    return make_exact(d, v);
  }
  if (auto* s = K.get_if<ScaledSpec>())
    return scaled_values(exact_intrinsic_volumes(*s->inner), s->factor);
  if (auto* s = K.get_if<BallSumSpec>())
    return ball_sum_values(exact_intrinsic_volumes(*s->inner), s->radius);
  raise(ErrorCode::Unsupported,
        std::string("no closed-form intrinsic volumes for variant '") + K.variant_name() +
            "'; use the Kubota estimator");
}

namespace {

// k-dimensional volume of the orthogonal shadow of K on the column span of U
// (U has orthonormal columns). `verts` caches polytope vertices.
double shadow_volume(const ConvexBody& K, const Mat& U, const std::vector<Vec>* verts) {
  const int k = static_cast<int>(U.cols());
  if (auto* b = K.get_if<BallSpec>()) return kappa(k) * std::pow(b->radius, k);
  if (auto* e = K.get_if<EllipsoidSpec>()) {
    Mat L = U.transpose() * e->frame * e->semi_axes.asDiagonal();
    return kappa(k) * std::sqrt(std::max((L * L.transpose()).determinant(), 0.0));
  }
  if (auto* s = K.get_if<SegmentSpec>()) {
    if (k > 1) return 0.0;
    return std::abs((U.transpose() * (s->b - s->a))(0));
  }
  if (auto* b = K.get_if<BoxSpec>()) {
    // projection of a box is a zonotope: sum over k-subsets of |det|
    const int d = K.dim();
    std::vector<int> idx(k);
    double vol = 0.0;
    Mat W = U.transpose();  // column i of W is the shadow of e_i
    std::vector<int> combo(k);
    for (int i = 0; i < k; ++i) combo[i] = i;
    Mat sub(k, k);
    while (true) {
      double sides = 1.0;
      for (int i = 0; i < k; ++i) {
        sub.col(i) = W.col(combo[i]);
        sides *= b->sides(combo[i]);
      }
      vol += sides * std::abs(sub.determinant());
      int i = k - 1;
      while (i >= 0 && combo[i] == d - k + i) --i;
      if (i < 0) break;
      ++combo[i];
      for (int j = i + 1; j < k; ++j) combo[j] = combo[j - 1] + 1;
    }
    return vol;
  }
  if (K.get_if<HalfspaceList>()) {
    std::vector<Vec> proj;
    proj.reserve(verts->size());
    for (const auto& v : *verts) proj.push_back(U.transpose() * v);
    return hull_volume(proj);
  }
  if (auto* s = K.get_if<ScaledSpec>())
    return std::pow(s->factor, k) * shadow_volume(*s->inner, U, verts);
  if (auto* s = K.get_if<BallSumSpec>()) {
    // closed forms for the inner bodies whose shadows we can Minkowski-grow
    if (auto* seg = s->inner->get_if<SegmentSpec>()) {
      double len = k == 1 ? std::abs((U.transpose() * (seg->b - seg->a))(0))
                          : (U.transpose() * (seg->b - seg->a)).norm();
      // capsule in R^k: kappa_k r^k + len * kappa_{k-1} r^{k-1}
      return kappa(k) * std::pow(s->radius, k) +
             len * (k >= 1 ? kappa(k - 1) : 0.0) * std::pow(s->radius, k - 1);
    }
    if (auto* b = s->inner->get_if<BallSpec>())
      return kappa(k) * std::pow(b->radius + s->radius, k);
    raise(ErrorCode::Unsupported, "shadow of a general Minkowski sum");
  }
  raise(ErrorCode::Unsupported, "shadow volume for this variant");
}

Mat random_subspace(int d, int k, Rng& rng) {
  Mat G(d, k);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < k; ++j) G(i, j) = rng.normal();
  Eigen::HouseholderQR<Mat> qr(G);
  Mat Q = qr.householderQ();
  return Q.leftCols(k);
}

}  // namespace

Estimate kubota_estimate(const ConvexBody& K, int k, int samples, uint64_t seed) {
  const int d = K.dim();
  if (k < 1 || k > d - 1) raise(ErrorCode::InvalidArgument, "kubota needs 1 <= k <= d-1");
  if (samples < 1) raise(ErrorCode::InvalidArgument, "kubota needs samples >= 1");
  const double norm = binomial(d, k) * kappa(d) / (kappa(k) * kappa(d - k));

  // segments at k=1: E|<u, e>| integrates in closed form, so the estimator
  // returns the exact length with zero variance
  if (auto* s = K.get_if<SegmentSpec>(); s && k == 1)
    return {(s->a - s->b).norm(), 0.0};

  const std::vector<Vec>* vert_cache = nullptr;
  std::vector<Vec> verts;
  if (auto* h = K.get_if<HalfspaceList>()) {
    verts = hpolytope_vertices(*h);
    vert_cache = &verts;
  }
  // chunked substreams keep the stream identical under any parallel split
  const int chunk = 8192;
  Rng base(seed);
  double sum = 0.0, sum2 = 0.0;
  int done = 0, chunk_idx = 0;
  while (done < samples) {
    Rng rng = base.derive(chunk_idx++);
    int todo = std::min(chunk, samples - done);
    for (int i = 0; i < todo; ++i) {
      Mat U = random_subspace(d, k, rng);
      double s = shadow_volume(K, U, vert_cache);
      sum += s;
      sum2 += s * s;
    }
    done += todo;
  }
  double mean = sum / samples;
  double var = std::max(sum2 / samples - mean * mean, 0.0);
  return {norm * mean, norm * std::sqrt(var / samples)};
}

IntrinsicVolumeVector intrinsic_volumes(const ConvexBody& K, int samples, uint64_t seed) {
  const int d = K.dim();
  try {
    return exact_intrinsic_volumes(K);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::Unsupported) throw;
  }
  if (auto* s = K.get_if<ScaledSpec>())
    return scaled_values(intrinsic_volumes(*s->inner, samples, seed), s->factor);
  if (auto* s = K.get_if<BallSumSpec>())
    return ball_sum_values(intrinsic_volumes(*s->inner, samples, seed), s->radius);

  IntrinsicVolumeVector out;
  out.dim = d;
  out.values = Vec::Zero(d + 1);
  out.stderrs = Vec::Zero(d + 1);
  out.exact.assign(d + 1, false);
  out.values(0) = 1.0;
  out.exact[0] = true;
  for (int k = 1; k <= d - 1; ++k) {
    Estimate e = kubota_estimate(K, k, samples, seed + 1000 * k);
    out.values(k) = e.value;
    out.stderrs(k) = e.stderr_;
    out.exact[k] = e.stderr_ == 0.0;
  }
  if (auto* e = K.get_if<EllipsoidSpec>()) {
    out.values(d) = kappa(d) * e->semi_axes.prod();
    out.exact[d] = true;
  } else if (auto* h = K.get_if<HalfspaceList>()) {
    out.values(d) = hull_volume(hpolytope_vertices(*h));
    out.exact[d] = true;
  } else {
    raise(ErrorCode::Unsupported, "intrinsic volumes for this variant");
  }
  return out;
}

double isoperimetric_ratio(const IntrinsicVolumeVector& V, int i, int j) {
  const int d = V.dim;
  if (!(1 <= i && i < j && j <= d)) raise(ErrorCode::InvalidArgument, "need 1 <= i < j <= d");
  if (V.v(i) <= 0.0) raise(ErrorCode::DegenerateBody, "V_i vanishes");
  double vj = std::max(V.v(j), 0.0);
  return std::pow(vj, 1.0 / j) / std::pow(V.v(i), 1.0 / i);
}

double isoperimetric_ratio(const ConvexBody& K, int i, int j, int samples, uint64_t seed) {
  return isoperimetric_ratio(intrinsic_volumes(K, samples, seed), i, j);
}

bool is_elongated(const ConvexBody& K, double eps, int i, int j, int samples, uint64_t seed) {
  if (!(eps > 0)) raise(ErrorCode::InvalidArgument, "eps must be positive");
  return isoperimetric_ratio(K, i, j, samples, seed) < eps;
}

SidePolynomial side_polynomial(const IntrinsicVolumeVector& V) {
  const int d = V.dim;
  SidePolynomial p;
  p.dim = d;
  p.coeffs = Vec::Zero(d);
  p.coeff_stderrs = Vec::Zero(d);
  for (int k = 0; k < d; ++k) {
    double w = (d - k) * kappa(d - k) / 2.0;
    p.coeffs(k) = w * V.v(k);
    p.coeff_stderrs(k) = w * V.se(k);
  }
  return p;
}

double eval_side(const SidePolynomial& p, double t) {
  double v = 0.0;
  for (int k = p.dim - 1; k >= 0; --k) v = v * t + p.coeffs(k);
  return v;
}

double eval_side_stderr(const SidePolynomial& p, double t) {
  double var = 0.0;
  for (int k = 0; k < p.dim; ++k) {
    double c = p.coeff_stderrs(k) * std::pow(t, k);
    var += c * c;
  }
  return std::sqrt(var);
}

Estimate mc_parallel_volume(const ConvexBody& K, double eps, int samples, uint64_t seed) {
  if (eps < 0) raise(ErrorCode::InvalidArgument, "eps must be >= 0");
  if (samples < 1000) raise(ErrorCode::InvalidArgument, "mc_parallel_volume needs samples >= 1000");
  const int d = K.dim();
  Vec lo, hi;
  bounding_box(K, eps, lo, hi);
  double boxvol = (hi - lo).prod();

  const int chunk = 8192;
  Rng base(seed);
  long hits = 0;
  int done = 0, chunk_idx = 0;
  Vec x(d);
  while (done < samples) {
    Rng rng = base.derive(chunk_idx++);
    int todo = std::min(chunk, samples - done);
    for (int i = 0; i < todo; ++i) {
      for (int j = 0; j < d; ++j) x(j) = rng.uniform(lo(j), hi(j));
      if (dist_to(K, x) <= eps) ++hits;
    }
    done += todo;
  }
  double p = double(hits) / samples;
  return {boxvol * p, boxvol * std::sqrt(std::max(p * (1.0 - p), 0.0) / samples)};
}

Estimate outer_vd1(const ConvexBody& K, int samples, uint64_t seed) {
  try {
    auto V = intrinsic_volumes(K, samples, seed);
    auto p = side_polynomial(V);
    return {eval_side(p, 1.0), eval_side_stderr(p, 1.0)};
  } catch (const Error& e) {
    if (e.code() != ErrorCode::Unsupported) throw;
  }
  auto sh = shell_surface_mc(K, 1.0, 0.02, samples, seed);
  return {sh.value / 2.0, sh.stderr_ / 2.0};
}

Estimate shell_surface_mc(const ConvexBody& K, double r, double h, int samples, uint64_t seed) {
  if (!(r > 0) || !(h > 0) || h >= 2 * r)
    raise(ErrorCode::InvalidArgument, "shell needs 0 < h < 2r");
  if (samples < 1000) raise(ErrorCode::InvalidArgument, "shell_surface_mc needs samples >= 1000");
  const int d = K.dim();
  Vec lo, hi;
  bounding_box(K, r + 0.5 * h, lo, hi);
  double boxvol = (hi - lo).prod();

  const int chunk = 8192;
  Rng base(seed);
  long hits = 0;
  int done = 0, chunk_idx = 0;
  Vec x(d);
  while (done < samples) {
    Rng rng = base.derive(chunk_idx++);
    int todo = std::min(chunk, samples - done);
    for (int i = 0; i < todo; ++i) {
      for (int j = 0; j < d; ++j) x(j) = rng.uniform(lo(j), hi(j));
      double dist = dist_to(K, x);
      if (dist > r - 0.5 * h && dist <= r + 0.5 * h) ++hits;
    }
    done += todo;
  }
  double p = double(hits) / samples;
  return {boxvol * p / h, boxvol * std::sqrt(std::max(p * (1.0 - p), 0.0) / samples) / h};
}

}  // namespace polyapprox
