#pragma once

#include <functional>
#include <string>
#include <vector>

#include "polyapprox/bodies.hpp"
#include "polyapprox/net_cloud.hpp"
#include "polyapprox/volumes.hpp"

namespace polyapprox {

// ---------------------------------------------------------------------------
// Greedy delta-nets on sampled metric spaces, their specialization to the
// boundary of the outer parallel body D = K + B^d and to (boundary K, d_m),
// and the cap-measure / cardinality verifiers.
// ---------------------------------------------------------------------------

/// Finite candidate cloud with a distance oracle. `density_radius` is the
/// claimed covering radius of the cloud inside the true space it samples.
struct SampledMetricSpace {
  std::vector<Vec> points;
  std::function<double(const Vec&, const Vec&)> metric;
  double density_radius = 0.0;

  /// Symmetry + triangle inequality on `triples` random triples (1e-9 slack).
  void spot_check_metric(int triples, uint64_t seed) const;
};

enum class MetricTag { Euclidean, Mixed };

struct NetCertificates {
  double min_pairwise = 0.0;        // > delta by construction (exact assert)
  double covering_radius = 0.0;     // max candidate -> nearest center
  double gamma = 0.0;               // cloud density radius within the true space
  bool packing_ok = false;          // min_pairwise > delta
  bool covering_ok = false;         // covering_radius <= delta + gamma
  long candidate_count = 0;
};

struct DeltaNet {
  std::vector<Vec> centers;                 // net points in the net's metric space
  std::vector<OuterBoundaryPoint> payload;  // x/foot/normal when on a body boundary
  double delta = 0.0;
  MetricTag metric_tag = MetricTag::Euclidean;
  NetCertificates cert;
  uint64_t seed = 0;

  int size() const { return static_cast<int>(centers.size()); }
};

/// Greedy maximal packing in seeded-shuffled candidate order: accept iff the
/// distance to every accepted center exceeds delta. The result is a
/// (delta/2)-packing and, by maximality, a delta-covering of the cloud.
/// Requires density_radius <= delta/10 (DensityViolation otherwise).
DeltaNet greedy_net(const SampledMetricSpace& space, double delta, uint64_t seed);

struct BoundaryNetOptions {
  int oversample = 0;  // extra random candidate directions on top of the flood fill
  long max_candidates = 8000000;
};

/// Euclidean delta-net on the boundary of D = K + B^d. Candidates come from
/// outer_boundary_sample over random directions and are densified (far probes
/// plus local jitter) until the measured cloud covering radius is <= delta/10.
DeltaNet boundary_net(const ConvexBody& K, double delta, int oversample, uint64_t seed);
DeltaNet boundary_net(const ConvexBody& K, double delta, const BoundaryNetOptions& opts,
                      uint64_t seed);

/// Delta-net of (boundary K, d_m), d_m = max(|x-y|, |v(x)-v(y)|): builds the
/// boundary cloud on D, projects every candidate to (foot, normal), then runs
/// the greedy filter under d_m with the projected boundary-net centers queued
/// first. Cardinality obeys the c12 V_{d-1}(D) delta^-(d-1) bound.
DeltaNet body_net(const ConvexBody& K, double delta, int oversample, uint64_t seed);
DeltaNet body_net(const ConvexBody& K, double delta, const BoundaryNetOptions& opts,
                  uint64_t seed);

// cloud-reusing entry points (delta sweeps share one candidate cloud); K is
// the body the cloud was built on (accepted centers are re-projected on it in
// full double precision)
DeltaNet boundary_net_from_cloud(const ConvexBody& K, const BoundaryCloud& cloud,
                                 double delta, uint64_t seed);
DeltaNet body_net_from_cloud(const ConvexBody& K, const BoundaryCloud& cloud, double delta,
                             uint64_t seed);

struct CapOptions {
  bool local_window = false;  // sample a box around the cap center, not the whole shell
  int min_hits = 100;
};

/// Shell Monte-Carlo estimate of H^{d-1} of the cap of D = K + B^d with the
/// given center and radius delta: sample the outer shell 1 < dist(x, K) <=
/// 1+h, project to the boundary with Pi_D(x) = foot + nu, count hits within
/// delta of the center. Throws InsufficientHits below min_hits.
Estimate cap_area_shell_mc(const ConvexBody& K, const OuterBoundaryPoint& center,
                           double delta, double h, int samples, uint64_t seed,
                           const CapOptions& opts = {});

/// Lemma bounds delta^{d-1} kappa_{d-1} 2^{-(d-1)} < cap area < delta^{d-1}
/// kappa_{d-1} d, checked over `trials` random cap centers per delta with a
/// 4-sigma Monte-Carlo allowance.
struct CapBoundsReport {
  struct Row {
    double delta;
    double lower, upper;       // the strict bounds
    double estimate, stderr_;  // shell MC
    bool pass;
  };
  std::vector<Row> rows;
  bool all_pass = true;
};

CapBoundsReport verify_cap_bounds(const ConvexBody& K, const std::vector<double>& deltas,
                                  int trials, int samples, uint64_t seed);

/// Lemma: c^{-1} psi delta^-k < |S| < 2^k c'^{-1} psi delta^-k.
std::pair<double, double> packing_count_bounds(double total_measure, double c_upper,
                                               double c_lower, double k, double delta);

struct CardinalityReport {
  double lower = 0.0, upper = 0.0;  // strict bounds on |S|
  long count = 0;
  double vd1 = 0.0, vd1_stderr = 0.0;  // V_{d-1}(D) used (4-sigma widened if MC)
  bool pass = false;
};

/// |S| strictly inside (c12min V_{d-1}(D) delta^-(d-1), c12 V_{d-1}(D)
/// delta^-(d-1)) for a net built on the boundary of D = K + B^d.
CardinalityReport verify_net_cardinality(const DeltaNet& net, const ConvexBody& K,
                                         int samples = 200000, uint64_t seed = 99);

}  // namespace polyapprox
