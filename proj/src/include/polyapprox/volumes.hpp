#pragma once

#include <cstdint>
#include <vector>

#include "polyapprox/bodies.hpp"

namespace polyapprox {

/// Volume of the unit n-ball, kappa_n = pi^{n/2} / Gamma(n/2 + 1); n in 0..12.
double kappa(int n);
/// Surface area of the unit n-sphere boundary, omega_n = n kappa_n; n in 1..12.
double omega(int n);

double binomial(int n, int k);

/// (V_0 .. V_d) of a body. Entries are exact or Monte-Carlo estimates with a
/// standard error attached (stderr 0 and exact=true for closed forms).
struct IntrinsicVolumeVector {
  int dim = 0;
  Vec values;
  Vec stderrs;
  std::vector<bool> exact;

  double v(int k) const { return values(k); }
  double se(int k) const { return stderrs(k); }
  bool all_exact() const;
};

struct Estimate {
  double value = 0.0;
  double stderr_ = 0.0;
};

/// Closed-form intrinsic volumes; supported for Ball, Box, Segment, and
/// Scaled/BallSum towers over those. Throws Unsupported otherwise.
IntrinsicVolumeVector exact_intrinsic_volumes(const ConvexBody& K);

/// Kubota projection estimator of V_k, 1 <= k <= d-1: mean k-shadow volume
/// over `samples` uniform k-subspaces, scaled by C(d,k) kappa_d/(kappa_k
/// kappa_{d-k}). Segments at k=1 use the closed-form expectation (exact).
Estimate kubota_estimate(const ConvexBody& K, int k, int samples, uint64_t seed);

/// Exact vector when available, otherwise per-index Kubota estimates plus the
/// exact V_0 and V_d (ellipsoid volume / polytope hull volume).
IntrinsicVolumeVector intrinsic_volumes(const ConvexBody& K, int samples = 100000,
                                        uint64_t seed = 2024);

/// V_j(K)^{1/j} / V_i(K)^{1/i}, 1 <= i < j <= d.
double isoperimetric_ratio(const IntrinsicVolumeVector& V, int i, int j);
double isoperimetric_ratio(const ConvexBody& K, int i, int j, int samples = 100000,
                           uint64_t seed = 2024);

bool is_elongated(const ConvexBody& K, double eps, int i, int j, int samples = 100000,
                  uint64_t seed = 2024);

/// p_C(t) = V_{d-1}(t K + B^d) = sum_k a_k t^k with a_k = (d-k) kappa_{d-k}/2
/// * V_k(K). (The /2 weight is forced by differentiating the Steiner formula;
/// see side_polynomial_printed_factor for the alternative normalization.)
struct SidePolynomial {
  int dim = 0;
  Vec coeffs;          // a_0 .. a_{d-1}
  Vec coeff_stderrs;   // 0 where the V_k are exact
};

SidePolynomial side_polynomial(const IntrinsicVolumeVector& V);
double eval_side(const SidePolynomial& p, double t);
double eval_side_stderr(const SidePolynomial& p, double t);

/// Monte-Carlo estimate of V_d(K + eps B^d) by rejection sampling in the
/// bounding box (membership: dist(x, K) <= eps). samples >= 1000.
Estimate mc_parallel_volume(const ConvexBody& K, double eps, int samples, uint64_t seed);

/// Monte-Carlo estimate of H^{d-1}(boundary of K + r B^d) from the centered
/// shell r - h/2 < dist(x,K) <= r + h/2 (volume/h; O(h^2) bias).
Estimate shell_surface_mc(const ConvexBody& K, double r, double h, int samples,
                          uint64_t seed);

/// V_{d-1}(K + B^d): exact through the side polynomial when the intrinsic
/// volumes are closed-form, Kubota-backed otherwise, shell Monte-Carlo as the
/// last resort.
Estimate outer_vd1(const ConvexBody& K, int samples = 100000, uint64_t seed = 2024);

}  // namespace polyapprox
