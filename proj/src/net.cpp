#include "polyapprox/net.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <numeric>
#include <unordered_map>
#include <unordered_set>

#include "polyapprox/rng.hpp"

namespace polyapprox {
namespace {

double dist_f(const float* a, const float* b, int d) {
  double s = 0.0;
  for (int i = 0; i < d; ++i) {
    double t = double(a[i]) - double(b[i]);
    s += t * t;
  }
  return std::sqrt(s);
}

// mixed metric on (foot, normal) pairs; normal = x - foot at r = 1
double dist_mixed_f(const float* xa, const float* fa, const float* xb, const float* fb,
                    int d) {
  double sf = 0.0, sn = 0.0;
  for (int i = 0; i < d; ++i) {
    double df = double(fa[i]) - double(fb[i]);
    double dn = (double(xa[i]) - double(fa[i])) - (double(xb[i]) - double(fb[i]));
    sf += df * df;
    sn += dn * dn;
  }
  return std::sqrt(std::max(sf, sn));
}

// Uniform hash grid over cloud indices. Cell size equals the query radius,
// so a radius query visits the 3^d neighborhood.
class Grid {
 public:
  Grid(int dim, double cell) : dim_(dim), cell_(cell) {}

  void insert(long idx, const float* p) { cells_[key(p)].push_back(idx); }

  // register idx in every cell of its 3^d neighborhood (for visit_cell)
  void insert_neighborhood(long idx, const float* p) {
    long base[kMaxDim];
    for (int i = 0; i < dim_; ++i) base[i] = cell_index(p[i]);
    int total = 1;
    for (int i = 0; i < dim_; ++i) total *= 3;
    for (int it = 0; it < total; ++it) {
      int t = it;
      uint64_t h = 1469598103934665603ULL;
      for (int i = 0; i < dim_; ++i) {
        h = hash_step(h, base[i] + t % 3 - 1);
        t /= 3;
      }
      cells_[h].push_back(idx);
    }
  }

  // visit indices registered in p's own cell only
  template <typename F>
  bool visit_cell(const float* p, F&& f) const {
    auto found = cells_.find(key(p));
    if (found == cells_.end()) return false;
    for (long idx : found->second)
      if (f(idx)) return true;
    return false;
  }

  // visit indices in the 3^d neighborhood of p; F returns true to stop early
  template <typename F>
  bool visit(const float* p, F&& f) const {
    long base[kMaxDim];
    for (int i = 0; i < dim_; ++i) base[i] = cell_index(p[i]);
    int total = 1;
    for (int i = 0; i < dim_; ++i) total *= 3;
    for (int it = 0; it < total; ++it) {
      int t = it;
      uint64_t h = 1469598103934665603ULL;
      for (int i = 0; i < dim_; ++i) {
        h = hash_step(h, base[i] + t % 3 - 1);
        t /= 3;
      }
      auto found = cells_.find(h);
      if (found == cells_.end()) continue;
      for (long idx : found->second)
        if (f(idx)) return true;
    }
    return false;
  }

 private:
  long cell_index(double v) const { return static_cast<long>(std::floor(v / cell_)); }

  static uint64_t hash_step(uint64_t h, long v) {
    h ^= static_cast<uint64_t>(v) + 0x9e3779b97f4a7c15ULL;
    h *= 1099511628211ULL;
    return h;
  }

  uint64_t key(const float* p) const {
    uint64_t h = 1469598103934665603ULL;
    for (int i = 0; i < dim_; ++i) h = hash_step(h, cell_index(p[i]));
    return h;
  }

  int dim_;
  double cell_;
  std::unordered_map<uint64_t, std::vector<long>> cells_;
};

Vec random_dir(int d, Rng& rng) {
  Vec u(d);
  double n = 0.0;
  do {
    for (int i = 0; i < d; ++i) u(i) = rng.normal();
    n = u.norm();
  } while (n < 1e-12);
  return u / n;
}

void push_sample(BoundaryCloud& cloud, const Vec& x, const Vec& foot) {
  for (int i = 0; i < cloud.dim; ++i) {
    cloud.x.push_back(static_cast<float>(x(i)));
    cloud.foot.push_back(static_cast<float>(foot(i)));
  }
}

}  // namespace

// --- candidate clouds --------------------------------------------------------

BoundaryCloud make_boundary_cloud(const ConvexBody& K, double gamma_target, int oversample,
                                  long max_candidates, uint64_t seed) {
  const int d = K.dim();
  if (!(gamma_target > 1e-6))
    raise(ErrorCode::InvalidArgument, "covering target too small for float candidates");
  BoundaryCloud cloud;
  cloud.dim = d;
  cloud.r = 1.0;
  cloud.build_seed = seed;
  cloud.oversample = oversample;
  cloud.max_candidates = max_candidates;

  // cell size: |x - cell_center| <= s sqrt(d)/2 for some boundary point x of
  // the cell implies |radial projection of center - x| <= s sqrt(d) since the
  // distance-to-K function is 1-Lipschitz; keep that <= gamma (float slack)
  const double s = (gamma_target - 4e-7) / std::sqrt(double(d));

  Vec lo, hi;
  bounding_box(K, 1.0 + 2.0 * gamma_target, lo, hi);
  long dims[kMaxDim];
  double total_cells = 1.0;
  for (int i = 0; i < d; ++i) {
    dims[i] = static_cast<long>(std::ceil((hi(i) - lo(i)) / s)) + 1;
    total_cells *= double(dims[i]);
  }
  const bool use_bitmap = total_cells < 6e9;
  std::vector<uint64_t> bitmap;
  std::unordered_set<uint64_t> visited_set;
  if (use_bitmap)
    bitmap.assign(static_cast<size_t>(total_cells / 64.0) + 2, 0);

  auto linear = [&](const long* c) {
    uint64_t idx = 0;
    for (int i = d - 1; i >= 0; --i) idx = idx * uint64_t(dims[i]) + uint64_t(c[i]);
    return idx;
  };
  auto test_and_mark = [&](const long* c) {
    uint64_t idx = linear(c);
    if (use_bitmap) {
      uint64_t word = idx >> 6, bit = 1ULL << (idx & 63);
      if (bitmap[word] & bit) return true;
      bitmap[word] |= bit;
      return false;
    }
    return !visited_set.insert(idx).second;
  };

  const double band = 0.5 * s * std::sqrt(double(d)) * (1.0 + 1e-12);
  Vec center(d), scratch_foot(d);
  auto cell_center = [&](const long* c, Vec& out) {
    for (int i = 0; i < d; ++i) out(i) = lo(i) + (double(c[i]) + 0.5) * s;
  };

  // seed: the cell of a known boundary point
  long start[kMaxDim];
  {
    OuterBoundaryPoint p0 = outer_boundary_sample(K, 1.0, Vec::Unit(d, 0));
    for (int i = 0; i < d; ++i) {
      start[i] = static_cast<long>(std::floor((p0.x(i) - lo(i)) / s));
      start[i] = std::clamp(start[i], 0L, dims[i] - 1);
    }
  }

  std::deque<std::array<long, kMaxDim>> queue;
  {
    std::array<long, kMaxDim> c{};
    for (int i = 0; i < d; ++i) c[i] = start[i];
    // the seed cell itself may sit just off-band; walk its 3^d block
    int total = 1;
    for (int i = 0; i < d; ++i) total *= 3;
    for (int it = 0; it < total; ++it) {
      int t = it;
      std::array<long, kMaxDim> n{};
      bool ok = true;
      for (int i = 0; i < d; ++i) {
        n[i] = c[i] + t % 3 - 1;
        t /= 3;
        if (n[i] < 0 || n[i] >= dims[i]) ok = false;
      }
      if (ok) queue.push_back(n);
    }
  }

  int neigh = 1;
  for (int i = 0; i < d; ++i) neigh *= 3;
  while (!queue.empty()) {
    std::array<long, kMaxDim> c = queue.front();
    queue.pop_front();
    if (test_and_mark(c.data())) continue;
    cell_center(c.data(), center);
    Vec foot = project_onto(K, center);
    double dist = (center - foot).norm();
    if (std::abs(dist - 1.0) > band || dist <= 1e-9) continue;
    // radial projection onto the boundary of D
    Vec q = foot + (center - foot) / dist;
    push_sample(cloud, q, foot);
    if (cloud.size() > max_candidates)
      raise(ErrorCode::DensityViolation,
            "candidate cloud exceeded " + std::to_string(max_candidates) + " points");
    for (int it = 0; it < neigh; ++it) {
      int t = it;
      std::array<long, kMaxDim> n{};
      bool ok = false, inrange = true;
      for (int i = 0; i < d; ++i) {
        int off = t % 3 - 1;
        t /= 3;
        n[i] = c[i] + off;
        if (off != 0) ok = true;
        if (n[i] < 0 || n[i] >= dims[i]) inrange = false;
      }
      if (ok && inrange) queue.push_back(n);
    }
  }
  if (cloud.size() == 0)
    raise(ErrorCode::DensityViolation, "flood fill found no boundary cells");

  if (oversample > 0) {
    Rng rng(seed);
    for (int i = 0; i < oversample; ++i) {
      OuterBoundaryPoint p = outer_boundary_sample(K, 1.0, random_dir(d, rng));
      push_sample(cloud, p.x, p.foot);
    }
    if (cloud.size() > max_candidates)
      raise(ErrorCode::DensityViolation,
            "candidate cloud exceeded " + std::to_string(max_candidates) + " points");
  }
  cloud.gamma = gamma_target;
  return cloud;
}

void densify_boundary_cloud(const ConvexBody& K, BoundaryCloud& cloud, double gamma_target) {
  if (cloud.gamma <= gamma_target) return;
  cloud = make_boundary_cloud(K, gamma_target, cloud.oversample, cloud.max_candidates,
                              cloud.build_seed);
}

// --- generic greedy net ------------------------------------------------------

void SampledMetricSpace::spot_check_metric(int triples, uint64_t seed) const {
  if (points.size() < 3) return;
  Rng rng(seed);
  for (int t = 0; t < triples; ++t) {
    const Vec& a = points[rng.below(points.size())];
    const Vec& b = points[rng.below(points.size())];
    const Vec& c = points[rng.below(points.size())];
    double ab = metric(a, b), ba = metric(b, a);
    if (std::abs(ab - ba) > 1e-9)
      raise(ErrorCode::InvalidArgument, "metric is not symmetric");
    if (metric(a, c) > ab + metric(b, c) + 1e-9)
      raise(ErrorCode::InvalidArgument, "metric violates the triangle inequality");
  }
}

DeltaNet greedy_net(const SampledMetricSpace& space, double delta, uint64_t seed) {
  if (!(delta > 0)) raise(ErrorCode::InvalidArgument, "delta must be positive");
  if (space.density_radius > delta / 10.0)
    raise(ErrorCode::DensityViolation, "candidate cloud too sparse: gamma > delta/10");
  space.spot_check_metric(1000, seed ^ 0xabcdULL);

  const long n = static_cast<long>(space.points.size());
  std::vector<long> order(n);
  std::iota(order.begin(), order.end(), 0);
  Rng rng(seed);
  rng.shuffle(order);

  DeltaNet net;
  net.delta = delta;
  net.seed = seed;
  net.metric_tag = MetricTag::Euclidean;
  for (long idx : order) {
    const Vec& p = space.points[idx];
    bool ok = true;
    for (const Vec& c : net.centers)
      if (space.metric(p, c) <= delta) {
        ok = false;
        break;
      }
    if (ok) net.centers.push_back(p);
  }

  double minpair = std::numeric_limits<double>::infinity();
  for (size_t i = 0; i < net.centers.size(); ++i)
    for (size_t j = i + 1; j < net.centers.size(); ++j)
      minpair = std::min(minpair, space.metric(net.centers[i], net.centers[j]));
  double cover = 0.0;
  for (long i = 0; i < n; ++i) {
    double best = std::numeric_limits<double>::infinity();
    for (const Vec& c : net.centers) best = std::min(best, space.metric(space.points[i], c));
    cover = std::max(cover, best);
  }
  net.cert.min_pairwise = net.centers.size() > 1 ? minpair : delta + 1.0;
  net.cert.covering_radius = cover;
  net.cert.gamma = space.density_radius;
  net.cert.packing_ok = net.cert.min_pairwise > delta;
  net.cert.covering_ok = cover <= delta + space.density_radius;
  net.cert.candidate_count = n;
  return net;
}

// --- boundary and body nets over clouds ---------------------------------------

namespace {

// exact double-precision boundary triple for an accepted float candidate
OuterBoundaryPoint exact_payload(const ConvexBody& K, const float* xf, int d) {
  Vec x(d);
  for (int i = 0; i < d; ++i) x(i) = xf[i];
  OuterBoundaryPoint p;
  p.foot = project_onto(K, x);
  double dist = (x - p.foot).norm();
  p.normal = (x - p.foot) / dist;
  p.x = p.foot + p.normal;
  return p;
}

DeltaNet thin_cloud(const ConvexBody& K, const BoundaryCloud& cloud, double delta,
                    bool mixed, const std::vector<long>& priority, uint64_t seed,
                    std::vector<long>* accepted_out = nullptr) {
  const int d = cloud.dim;
  const long n = cloud.size();

  auto dm = [&](long a, long b) {
    return mixed ? dist_mixed_f(cloud.xp(a), cloud.fp(a), cloud.xp(b), cloud.fp(b), d)
                 : dist_f(cloud.xp(a), cloud.xp(b), d);
  };
  // the grid runs on coordinates that lower-bound the metric
  auto coords = [&](long i) { return mixed ? cloud.fp(i) : cloud.xp(i); };

  Rng rng(seed);
  std::vector<long> order;
  order.reserve(n);
  {
    std::vector<long> pri = priority;
    rng.shuffle(pri);
    std::vector<char> in_pri(n, 0);
    for (long i : pri) in_pri[i] = 1;
    std::vector<long> rest;
    rest.reserve(n - static_cast<long>(pri.size()));
    for (long i = 0; i < n; ++i)
      if (!in_pri[i]) rest.push_back(i);
    rng.shuffle(rest);
    order = std::move(pri);
    order.insert(order.end(), rest.begin(), rest.end());
  }

  Grid grid(d, delta);
  std::vector<long> accepted;
  for (long idx : order) {
    bool blocked = grid.visit(coords(idx), [&](long c) { return dm(idx, c) <= delta; });
    if (!blocked) {
      grid.insert(idx, coords(idx));
      accepted.push_back(idx);
    }
  }

  DeltaNet net;
  net.delta = delta;
  net.seed = seed;
  net.metric_tag = mixed ? MetricTag::Mixed : MetricTag::Euclidean;
  net.centers.reserve(accepted.size());
  net.payload.reserve(accepted.size());
  for (long idx : accepted) {
    OuterBoundaryPoint p = exact_payload(K, cloud.xp(idx), d);
    net.centers.push_back(mixed ? p.foot : p.x);
    net.payload.push_back(std::move(p));
  }

  // certificates on the cloud coordinates the greedy filter saw
  double minpair = std::numeric_limits<double>::infinity();
  for (size_t i = 0; i < accepted.size(); ++i)
    for (size_t j = i + 1; j < accepted.size(); ++j)
      minpair = std::min(minpair, dm(accepted[i], accepted[j]));
  // covering radius: one lookup per candidate into premerged 3^d center lists
  double cover = 0.0;
  {
    Grid merged(d, delta);
    for (long c : accepted) merged.insert_neighborhood(c, coords(c));
    for (long i = 0; i < n; ++i) {
      double best = std::numeric_limits<double>::infinity();
      merged.visit_cell(coords(i), [&](long c) {
        best = std::min(best, dm(i, c));
        return best <= cover;  // cannot raise the max any more
      });
      cover = std::max(cover, best);  // maximality keeps best <= delta
    }
  }
  net.cert.min_pairwise = accepted.size() > 1 ? minpair : delta + 1.0;
  net.cert.covering_radius = cover;
  net.cert.gamma = cloud.gamma;
  net.cert.packing_ok = net.cert.min_pairwise > delta;
  net.cert.covering_ok = cover <= delta + cloud.gamma;
  net.cert.candidate_count = n;
  if (accepted_out) *accepted_out = std::move(accepted);
  return net;
}

}  // namespace

DeltaNet boundary_net_from_cloud(const ConvexBody& K, const BoundaryCloud& cloud,
                                 double delta, uint64_t seed) {
  if (!(delta > 0 && delta < 1))
    raise(ErrorCode::InvalidArgument, "boundary net needs delta in (0,1)");
  if (cloud.gamma > delta / 10.0)
    raise(ErrorCode::DensityViolation, "candidate cloud too sparse: gamma > delta/10");
  return thin_cloud(K, cloud, delta, /*mixed=*/false, {}, seed);
}

DeltaNet body_net_from_cloud(const ConvexBody& K, const BoundaryCloud& cloud, double delta,
                             uint64_t seed) {
  if (!(delta > 0 && delta < 1))
    raise(ErrorCode::InvalidArgument, "body net needs delta in (0,1)");
  if (cloud.gamma > delta / 10.0)
    raise(ErrorCode::DensityViolation, "candidate cloud too sparse: gamma > delta/10");
  Rng rng(seed);
  // stage 1: Euclidean net on the boundary of D; its members get priority in
  // the mixed-metric pass, mirroring "project the net, then re-thin"
  std::vector<long> priority;
  thin_cloud(K, cloud, delta, /*mixed=*/false, {}, rng.derive(1).next_u64(), &priority);
  return thin_cloud(K, cloud, delta, /*mixed=*/true, priority, rng.derive(2).next_u64());
}

DeltaNet boundary_net(const ConvexBody& K, double delta, int oversample, uint64_t seed) {
  BoundaryNetOptions opts;
  opts.oversample = oversample;
  return boundary_net(K, delta, opts, seed);
}

DeltaNet boundary_net(const ConvexBody& K, double delta, const BoundaryNetOptions& opts,
                      uint64_t seed) {
  if (!(delta > 0 && delta < 1))
    raise(ErrorCode::InvalidArgument, "boundary net needs delta in (0,1)");
  Rng rng(seed);
  BoundaryCloud cloud = make_boundary_cloud(K, 0.98 * delta / 10.0, opts.oversample,
                                            opts.max_candidates, rng.derive(1).next_u64());
  return boundary_net_from_cloud(K, cloud, delta, rng.derive(2).next_u64());
}

DeltaNet body_net(const ConvexBody& K, double delta, int oversample, uint64_t seed) {
  BoundaryNetOptions opts;
  opts.oversample = oversample;
  return body_net(K, delta, opts, seed);
}

DeltaNet body_net(const ConvexBody& K, double delta, const BoundaryNetOptions& opts,
                  uint64_t seed) {
  if (!(delta > 0 && delta < 1))
    raise(ErrorCode::InvalidArgument, "body net needs delta in (0,1)");
  Rng rng(seed);
  BoundaryCloud cloud = make_boundary_cloud(K, 0.98 * delta / 10.0, opts.oversample,
                                            opts.max_candidates, rng.derive(1).next_u64());
  return body_net_from_cloud(K, cloud, delta, rng.derive(2).next_u64());
}

// --- caps ----------------------------------------------------------------------

Estimate cap_area_shell_mc(const ConvexBody& K, const OuterBoundaryPoint& center,
                           double delta, double h, int samples, uint64_t seed,
                           const CapOptions& opts) {
  if (!(delta > 0)) raise(ErrorCode::InvalidArgument, "cap radius must be positive");
  if (!(h > 0 && h <= delta / 10.0))
    raise(ErrorCode::InvalidArgument, "shell half-width needs 0 < h <= delta/10");
  const int d = K.dim();
  Vec lo, hi;
  bounding_box(K, 1.0 + h, lo, hi);
  if (opts.local_window) {
    // every shell point whose boundary projection lands in the cap lies
    // within delta + h of the cap center
    for (int i = 0; i < d; ++i) {
      lo(i) = std::max(lo(i), center.x(i) - (delta + h));
      hi(i) = std::min(hi(i), center.x(i) + (delta + h));
    }
  }
  double boxvol = 1.0;
  for (int i = 0; i < d; ++i) boxvol *= std::max(hi(i) - lo(i), 0.0);

  Rng base(seed);
  long cap_hits = 0;
  const int chunk = 8192;
  int done = 0, chunk_idx = 0;
  Vec x(d);
  while (done < samples) {
    Rng rng = base.derive(chunk_idx++);
    int todo = std::min(chunk, samples - done);
    for (int s = 0; s < todo; ++s) {
      for (int j = 0; j < d; ++j) x(j) = rng.uniform(lo(j), hi(j));
      Vec foot = project_onto(K, x);
      double dist = (x - foot).norm();
      if (dist <= 1.0 || dist > 1.0 + h) continue;
      Vec pi_d = foot + (x - foot) / dist;  // closed-form projection onto D
      if ((pi_d - center.x).norm() < delta) ++cap_hits;
    }
    done += todo;
  }
  if (cap_hits < opts.min_hits)
    raise(ErrorCode::InsufficientHits,
          "only " + std::to_string(cap_hits) + " cap hits (< " +
              std::to_string(opts.min_hits) + ")");
  double p = double(cap_hits) / samples;
  return {boxvol * p / h, boxvol * std::sqrt(std::max(p * (1.0 - p), 0.0) / samples) / h};
}

CapBoundsReport verify_cap_bounds(const ConvexBody& K, const std::vector<double>& deltas,
                                  int trials, int samples, uint64_t seed) {
  const int d = K.dim();
  CapBoundsReport report;
  Rng base(seed);
  for (size_t di = 0; di < deltas.size(); ++di) {
    double delta = deltas[di];
    if (!(delta > 0 && delta < 1))
      raise(ErrorCode::InvalidArgument, "cap bounds need delta in (0,1)");
    double lower = std::pow(delta, d - 1) * kappa(d - 1) * std::pow(2.0, -(d - 1));
    double upper = std::pow(delta, d - 1) * kappa(d - 1) * d;
    for (int t = 0; t < trials; ++t) {
      Rng rng = base.derive(di * 1000003 + t);
      Vec u = random_dir(d, rng);
      OuterBoundaryPoint center = outer_boundary_sample(K, 1.0, u);
      Estimate est = cap_area_shell_mc(K, center, delta, delta / 20.0, samples,
                                       rng.next_u64(), {.local_window = true});
      CapBoundsReport::Row row;
      row.delta = delta;
      row.lower = lower;
      row.upper = upper;
      row.estimate = est.value;
      row.stderr_ = est.stderr_;
      row.pass = est.value > lower - 4.0 * est.stderr_ && est.value < upper + 4.0 * est.stderr_;
      if (!row.pass) report.all_pass = false;
      report.rows.push_back(row);
    }
  }
  return report;
}

std::pair<double, double> packing_count_bounds(double total_measure, double c_upper,
                                               double c_lower, double k, double delta) {
  if (!(total_measure > 0 && c_upper > 0 && c_lower > 0 && k > 0 && delta > 0))
    raise(ErrorCode::InvalidArgument, "packing_count_bounds needs positive arguments");
  double lo = total_measure / (c_upper * std::pow(delta, k));
  double hi = std::pow(2.0, k) * total_measure / (c_lower * std::pow(delta, k));
  return {lo, hi};
}

CardinalityReport verify_net_cardinality(const DeltaNet& net, const ConvexBody& K,
                                         int samples, uint64_t seed) {
  if (net.metric_tag != MetricTag::Euclidean)
    raise(ErrorCode::InvalidArgument, "cardinality bounds apply to boundary nets");
  if (!(net.delta > 0 && net.delta < 1))
    raise(ErrorCode::InvalidArgument, "cardinality bounds need delta in (0,1)");
  const int d = K.dim();
  const double c12min = 2.0 / (d * kappa(d - 1));
  const double c12 = std::pow(4.0, d) / kappa(d - 1);

  CardinalityReport rep;
  Estimate vd1 = outer_vd1(K, samples, seed);
  rep.vd1 = vd1.value;
  rep.vd1_stderr = vd1.stderr_;
  double dk = std::pow(net.delta, -(d - 1));
  rep.lower = c12min * (rep.vd1 - 4.0 * rep.vd1_stderr) * dk;
  rep.upper = c12 * (rep.vd1 + 4.0 * rep.vd1_stderr) * dk;
  rep.count = net.size();
  rep.pass = rep.count > rep.lower && rep.count < rep.upper;
  if (!rep.pass)
    raise(ErrorCode::BoundViolation,
          "net cardinality " + std::to_string(rep.count) + " outside (" +
              std::to_string(rep.lower) + ", " + std::to_string(rep.upper) + ")");
  return rep;
}

}  // namespace polyapprox
