#include "polyapprox/shape.hpp"

#include <cmath>

namespace polyapprox {

double ConstantsTable::c_ij(int i, int j) const { return v(j0) * v(i) / (v(j) * v(1)); }

double ConstantsTable::delta_ij(int i, int j) const {
  return delta_1j0 * std::pow(c_ij(i, j), beta_strong);
}

double ConstantsTable::n_ij(int i, int j) const {
  return n_1j0 * std::pow(c_ij(i, j), -alpha);
}

void ConstantsTable::require_pair(int i, int j) const {
  if (!(1 <= i && i < j && j <= j0))
    raise(ErrorCode::InvalidIndexPair,
          "need 1 <= i < j <= ceil((d-1)/2) = " + std::to_string(j0));
}

ConstantsTable constants(int d) {
  if (d < 2 || d > kMaxDim) raise(ErrorCode::InvalidArgument, "constants need 2 <= d <= 6");
  ConstantsTable c;
  c.d = d;
  c.j0 = (d - 1 + 1) / 2;  // ceil((d-1)/2)
  c.c12min = 2.0 / (d * kappa(d - 1));
  c.c12 = std::pow(4.0, d) / kappa(d - 1);
  c.c12bis = std::pow(3.0, (d - 1) / 4.0) * c.c12;
  c.c13 = std::pow(c.c12bis, 2.0 / (d - 1));
  c.c13bis = 1.01 * c.c13;

  auto vb = exact_intrinsic_volumes(ConvexBody::ball(d));
  c.c12bisbis = c.c12bis * vb.v(d - 1);
  c.v = Vec::Zero(d + 1);
  for (int k = 1; k <= d; ++k) c.v(k) = std::pow(vb.v(k), 1.0 / k);

  auto w = [&](int k) { return (d - k) * kappa(d - k) / 2.0; };
  // k = 0 terms are w(0) * V_0 = d kappa_d / 2 under the corrected weight
  c.cIV1 = w(0);
  for (int k = 1; k <= c.j0 - 1; ++k) c.cIV1 += w(k) * std::pow(c.v(k) / c.v(1), k);
  c.cIV2 = 0.0;
  for (int k = c.j0; k <= d - 1; ++k) c.cIV2 += w(k) * std::pow(c.v(k) / c.v(c.j0), k);
  c.cIV3 = std::pow(c.cIV2 * (d - 1) / c.cIV1, -2.0 / d);
  c.cIV4 = c.cIV1 * std::pow(c.cIV3, -0.5) + c.cIV2 * std::pow(c.cIV3, (d - 1) / 2.0);
  c.cIV5 = w(0);
  for (int k = 1; k <= d - 1; ++k) c.cIV5 += w(k) * std::pow(c.v(k) / c.v(1), k);

  c.alpha = 2.0 * c.j0 * (d - 1) / d;
  c.beta_strong = 2.0 * c.j0 / ((d - 1) * d);
  c.beta_thm = double(c.j0) / ((d - 1) * d);
  c.delta_1j0 = std::pow(c.cIV4, 2.0 / (d - 1));
  c.n_1j0 = c.c12bis * c.cIV5 * std::pow(c.cIV3, d - 1);
  return c;
}

namespace {

// strictly increasing polynomial inversion by bisection, relative tol 1e-12
double invert_side(const SidePolynomial& p, double target) {
  double lo = 0.0, hi = 1.0;
  while (eval_side(p, hi) < target) {
    hi *= 2.0;
    if (hi > 1e18) raise(ErrorCode::ConvergenceFailure, "side polynomial inversion diverged");
  }
  for (int it = 0; it < 200 && (hi - lo) > 1e-12 * hi; ++it) {
    double mid = 0.5 * (lo + hi);
    if (eval_side(p, mid) < target) lo = mid;
    else hi = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace

ShapeEval shape_eval(const SidePolynomial& p, double v1, double l) {
  const int d = p.dim;
  ConstantsTable C = constants(d);
  if (!(l > C.c12bisbis))
    raise(ErrorCode::ParameterBelowThreshold,
          "need l > c12bisbis = " + std::to_string(C.c12bisbis));
  if (!(v1 > 0)) raise(ErrorCode::DegenerateBody, "V_1 must be positive");

  ShapeEval out;
  out.rho = invert_side(p, l / C.c12bis);

  // f(t) = t^{-(d-1)/2} p_C(t) is a positive sum of power terms, hence
  // convex in log t; golden-section on [rho*1e-9, rho] in log scale
  auto f = [&](double t) { return std::pow(t, -(d - 1) / 2.0) * eval_side(p, t); };
  const double golden = 0.6180339887498949;
  double a = std::log(out.rho * 1e-9), b = std::log(out.rho);
  double x1 = b - golden * (b - a), x2 = a + golden * (b - a);
  double f1 = f(std::exp(x1)), f2 = f(std::exp(x2));
  for (int it = 0; it < 200 && (b - a) > 1e-12; ++it) {
    if (f1 <= f2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - golden * (b - a);
      f1 = f(std::exp(x1));
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + golden * (b - a);
      f2 = f(std::exp(x2));
    }
  }
  out.t_star = std::exp(0.5 * (a + b));
  out.f_min = f(out.t_star);
  // the infimum over the open interval extends continuously to the endpoint
  if (f(out.rho) < out.f_min) {
    out.t_star = out.rho;
    out.f_min = f(out.rho);
  }
  out.phi = std::pow(out.f_min, 2.0 / (d - 1));
  out.g = out.phi / v1;
  return out;
}

namespace {

ShapeEval shape_eval_body(const ConvexBody& K, double l, int samples, uint64_t seed) {
  auto V = intrinsic_volumes(K, samples, seed);
  return shape_eval(side_polynomial(V), V.v(1), l);
}

}  // namespace

double rho(const ConvexBody& K, double l, int samples, uint64_t seed) {
  return shape_eval_body(K, l, samples, seed).rho;
}
double phi(const ConvexBody& K, double l, int samples, uint64_t seed) {
  return shape_eval_body(K, l, samples, seed).phi;
}
double g(const ConvexBody& K, double l, int samples, uint64_t seed) {
  return shape_eval_body(K, l, samples, seed).g;
}

ElongationCertificate elongation_certificate(const ConvexBody& K, double eps, int i, int j,
                                             int samples, uint64_t seed) {
  const int d = K.dim();
  ConstantsTable C = constants(d);
  C.require_pair(i, j);
  if (!(eps > 0)) raise(ErrorCode::InvalidArgument, "eps must be positive");

  auto V = intrinsic_volumes(K, samples, seed);
  ElongationCertificate cert;
  cert.i = i;
  cert.j = j;
  cert.eps = eps;
  cert.ratio = isoperimetric_ratio(V, i, j);
  {
    // first-order error propagation through the ratio
    double r = cert.ratio;
    double dvj = r > 0 ? V.se(j) / (j * std::max(V.v(j), 1e-300)) : 0.0;
    double dvi = V.se(i) / (i * V.v(i));
    cert.ratio_stderr = r * std::sqrt(dvj * dvj + dvi * dvi);
  }
  cert.elongated = cert.ratio < eps;

  const double ceps = C.c_ij(i, j) * eps;
  cert.t_eps = C.cIV3 * std::pow(ceps, -2.0 * C.j0 / d);
  cert.applicable = cert.t_eps > 1.0;
  cert.N = C.n_ij(i, j) * std::pow(eps, -C.alpha);
  cert.bound = C.delta_ij(i, j) * std::pow(eps, C.beta_strong);

  // normalize to V_1 = 1 (both sides of the lemma are scale invariant)
  IntrinsicVolumeVector Vn = V;
  for (int k = 0; k <= d; ++k) {
    Vn.values(k) = V.values(k) / std::pow(V.v(1), k);
    Vn.stderrs(k) = V.stderrs(k) / std::pow(V.v(1), k);
  }
  auto pn = side_polynomial(Vn);
  ShapeEval se = shape_eval(pn, 1.0, cert.N);
  cert.g_value = se.g;
  cert.rho_N = se.rho;
  cert.chain_rho_ok = se.rho > cert.t_eps;
  cert.f_at_teps = std::pow(cert.t_eps, -(d - 1) / 2.0) * eval_side(pn, cert.t_eps);
  cert.q_at_teps = C.cIV4 * std::pow(ceps, double(C.j0) / d);
  cert.chain_f_ok = cert.f_at_teps <= cert.q_at_teps;
  cert.passed = cert.elongated && cert.applicable && cert.g_value <= cert.bound;
  return cert;
}

Theorem1Bound theorem1_bound(const ConvexBody& K, double n, double eps, int i, int j,
                             int samples, uint64_t seed) {
  const int d = K.dim();
  ConstantsTable C = constants(d);
  C.require_pair(i, j);
  if (!(eps > 0)) raise(ErrorCode::InvalidArgument, "eps must be positive");

  Theorem1Bound out;
  out.threshold_n = C.n_ij(i, j) * std::pow(eps, -C.alpha);
  if (n < out.threshold_n)
    raise(ErrorCode::ThresholdNotMet,
          "n below n_ij eps^-alpha = " + std::to_string(out.threshold_n));
  double v1 = intrinsic_volumes(K, samples, seed).v(1);
  double nfac = std::pow(n, -2.0 / (d - 1));
  out.dh_bound = C.delta_ij(i, j) * std::pow(eps, C.beta_strong) * v1 * nfac;
  out.dh_bound_printed = C.delta_ij(i, j) * std::pow(eps, C.beta_thm) * v1 * nfac;
  return out;
}

}  // namespace polyapprox
