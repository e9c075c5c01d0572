#pragma once

#include <cstdint>

#include "polyapprox/bodies.hpp"
#include "polyapprox/volumes.hpp"

namespace polyapprox {

// ---------------------------------------------------------------------------
// Dimension-dependent constants and the elongation shape factor g_l.
//
// All Steiner-type weights use (d-k) kappa_{d-k} / 2, the form that survives
// the brute-force parallel-volume oracle, and that weight propagates into
// every derived constant here (cIV1/cIV5 start at d kappa_d / 2, the k = 0
// term of the corrected sum).
// ---------------------------------------------------------------------------

struct ConstantsTable {
  int d = 0;
  int j0 = 0;  // ceil((d-1)/2)
  double c12min = 0, c12 = 0, c12bis = 0, c12bisbis = 0, c13 = 0, c13bis = 0;
  Vec v;  // v(k) = V_k(B^d)^{1/k} for k = 1..d; v(0) unused
  double cIV1 = 0, cIV2 = 0, cIV3 = 0, cIV4 = 0, cIV5 = 0;
  double alpha = 0;        // 2 j0 (d-1) / d
  double beta_strong = 0;  // 2 j0 / ((d-1) d), the proof exponent
  double beta_thm = 0;     // j0 / ((d-1) d), the printed theorem exponent
  double delta_1j0 = 0;    // cIV4^{2/(d-1)}
  double n_1j0 = 0;        // c12bis cIV5 cIV3^{d-1}

  double c_ij(int i, int j) const;      // v_{j0} v_i / (v_j v_1)
  double delta_ij(int i, int j) const;  // delta_1j0 c^{beta_strong}
  double n_ij(int i, int j) const;      // n_1j0 c^{-alpha}
  void require_pair(int i, int j) const;
};

/// All closed forms for 2 <= d <= 6.
ConstantsTable constants(int d);

struct ShapeEval {
  double rho = 0;     // p_C^{-1}(l / c12bis)
  double phi = 0;     // inf over (0, rho] of V_{d-1}(tK+B)^{2/(d-1)} / t
  double g = 0;       // phi / V_1
  double t_star = 0;  // minimizer of f(t) = t^{-(d-1)/2} p_C(t)
  double f_min = 0;
};

/// Evaluate rho_l, phi_l, g_l from a side polynomial and V_1(K); requires
/// l > c12bisbis (ParameterBelowThreshold) and V_1 > 0 (DegenerateBody).
ShapeEval shape_eval(const SidePolynomial& p, double v1, double l);

// single-value wrappers over the body (intrinsic volumes computed inside)
double rho(const ConvexBody& K, double l, int samples = 100000, uint64_t seed = 2024);
double phi(const ConvexBody& K, double l, int samples = 100000, uint64_t seed = 2024);
double g(const ConvexBody& K, double l, int samples = 100000, uint64_t seed = 2024);

/// Certificate for the elongation bound: if K is (eps:i,j)-elongated and the
/// proof's t_eps > 1 condition holds, then g_{N}(K) <= delta_ij eps^beta with
/// N = n_ij eps^-alpha. Requires 1 <= i < j <= j0 (so d >= 4).
struct ElongationCertificate {
  int i = 0, j = 0;
  double eps = 0;
  double ratio = 0;         // measured V_j^{1/j} / V_i^{1/i}
  double ratio_stderr = 0;
  bool elongated = false;   // ratio < eps
  double N = 0;             // n_ij eps^-alpha
  double bound = 0;         // delta_ij eps^beta_strong
  double g_value = 0;       // g_N(K)
  double t_eps = 0;         // cIV3 (c_ij eps)^{-2 j0 / d}
  bool applicable = false;  // t_eps > 1
  bool passed = false;      // elongated && applicable && g <= bound
  // proof-chain diagnostics
  double rho_N = 0;         // for the V_1-normalized body
  bool chain_rho_ok = false;    // rho_N > t_eps
  double f_at_teps = 0, q_at_teps = 0;
  bool chain_f_ok = false;      // f(t_eps) <= cIV4 (c_ij eps)^{j0/d}
};

ElongationCertificate elongation_certificate(const ConvexBody& K, double eps, int i, int j,
                                             int samples = 100000, uint64_t seed = 2024);

struct Theorem1Bound {
  double threshold_n = 0;      // n_ij eps^-alpha
  double dh_bound = 0;         // delta_ij eps^beta_strong V_1(K) n^{-2/(d-1)}
  double dh_bound_printed = 0; // same with the printed exponent beta_thm
};

/// Right side of Theorem 1 at facet count n (ThresholdNotMet if n below
/// n_ij eps^-alpha).
Theorem1Bound theorem1_bound(const ConvexBody& K, double n, double eps, int i, int j,
                             int samples = 100000, uint64_t seed = 2024);

}  // namespace polyapprox
