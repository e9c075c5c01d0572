#include "polyapprox/convex_hull.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <numeric>

namespace polyapprox {
namespace {

double hash01(uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  z ^= z >> 31;
  return static_cast<double>(z >> 11) * 0x1.0p-53;
}

struct Facet {
  std::vector<int> verts;  // k vertex indices
  Vec normal;              // outward unit normal
  double offset;           // <normal, x> = offset on the facet plane
  bool alive = true;
};

// Hyperplane through the k points (rows of M are differences to the first);
// returns false when the points are affinely degenerate.
bool facet_plane(const std::vector<Vec>& pts, const std::vector<int>& ids,
                 const Vec& interior, Vec& normal, double& offset) {
  const int k = static_cast<int>(pts[0].size());
  Mat diff(k - 1, k);
  for (int i = 1; i < k; ++i) diff.row(i - 1) = (pts[ids[i]] - pts[ids[0]]).transpose();
  Eigen::JacobiSVD<Mat> svd(diff, Eigen::ComputeFullV);
  if (k >= 2 && svd.singularValues()(k - 2) < 1e-13 * (1.0 + svd.singularValues()(0)))
    return false;
  normal = svd.matrixV().col(k - 1);
  offset = normal.dot(pts[ids[0]]);
  if (normal.dot(interior) > offset) {
    normal = -normal;
    offset = -offset;
  }
  return true;
}

// shared incremental-hull core: returns volume, optionally collects facet
// planes; returns -1 on inconsistency (caller re-joggles)
double attempt_hull(const std::vector<Vec>& pts, double scale, int attempt,
                    std::vector<std::pair<Vec, double>>* planes_out) {
  const int k = static_cast<int>(pts[0].size());
  const int n = static_cast<int>(pts.size());
  const double eps_vis = 1e-10 * scale * std::pow(10.0, attempt);

  std::vector<Vec> p = pts;
  if (attempt > 0) {
    const double jog = 1e-11 * scale * std::pow(100.0, attempt);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < k; ++j)
        p[i](j) += jog * (hash01(uint64_t(i) * 131 + j + uint64_t(attempt) * 100003) - 0.5);
  }

  // initial affinely independent simplex, greedy-farthest construction
  std::vector<int> simplex;
  simplex.push_back(0);
  while (static_cast<int>(simplex.size()) < k + 1) {
    // orthonormal basis of the current affine span
    Mat basis(k, static_cast<int>(simplex.size()) - 1);
    for (size_t i = 1; i < simplex.size(); ++i)
      basis.col(static_cast<int>(i) - 1) = p[simplex[i]] - p[simplex[0]];
    Eigen::HouseholderQR<Mat> qr(basis);
    Mat q = basis.cols() > 0 ? Mat(qr.householderQ()) : Mat();
    int best = -1;
    double best_res = 1e-9 * scale;
    for (int i = 0; i < n; ++i) {
      Vec d = p[i] - p[simplex[0]];
      if (basis.cols() > 0) {
        Vec proj = q.leftCols(basis.cols()).transpose() * d;
        d -= q.leftCols(basis.cols()) * proj;
      }
      double r = d.norm();
      if (r > best_res) {
        best_res = r;
        best = i;
      }
    }
    if (best < 0) return 0.0;  // not full-dimensional
    simplex.push_back(best);
  }

  Vec interior = Vec::Zero(k);
  for (int id : simplex) interior += p[id];
  interior /= static_cast<double>(k + 1);

  std::vector<Facet> facets;
  for (int skip = 0; skip <= k; ++skip) {
    std::vector<int> ids;
    for (int i = 0; i <= k; ++i)
      if (i != skip) ids.push_back(simplex[i]);
    Facet f;
    f.verts = ids;
    if (!facet_plane(p, ids, interior, f.normal, f.offset)) return -1.0;
    facets.push_back(std::move(f));
  }

  std::vector<char> used(n, 0);
  for (int id : simplex) used[id] = 1;

  for (int pi = 0; pi < n; ++pi) {
    if (used[pi]) continue;
    std::vector<int> visible;
    for (int fi = 0; fi < static_cast<int>(facets.size()); ++fi)
      if (facets[fi].alive && facets[fi].normal.dot(p[pi]) > facets[fi].offset + eps_vis)
        visible.push_back(fi);
    if (visible.empty()) continue;

    // horizon ridges appear exactly once among the visible facets
    std::map<std::vector<int>, int> ridge_count;
    for (int fi : visible) {
      const auto& vs = facets[fi].verts;
      for (size_t skip = 0; skip < vs.size(); ++skip) {
        std::vector<int> ridge;
        for (size_t i = 0; i < vs.size(); ++i)
          if (i != skip) ridge.push_back(vs[i]);
        std::sort(ridge.begin(), ridge.end());
        ridge_count[ridge]++;
      }
    }
    for (int fi : visible) facets[fi].alive = false;
    for (const auto& [ridge, count] : ridge_count) {
      if (count != 1) continue;
      Facet f;
      f.verts = ridge;
      f.verts.push_back(pi);
      if (!facet_plane(p, f.verts, interior, f.normal, f.offset)) return -1.0;
      facets.push_back(std::move(f));
    }
  }

  double vol = 0.0;
  Mat simp(k, k);
  for (const Facet& f : facets) {
    if (!f.alive) continue;
    for (int i = 0; i < k; ++i) simp.col(i) = p[f.verts[i]] - interior;
    vol += std::abs(simp.determinant());
    if (planes_out) planes_out->emplace_back(f.normal, f.offset);
  }
  double fact = 1.0;
  for (int i = 2; i <= k; ++i) fact *= i;
  return vol / fact;
}

double run_hull(const std::vector<Vec>& pts, std::vector<std::pair<Vec, double>>* planes_out,
                double* volume_out) {
  if (volume_out) *volume_out = 0.0;
  if (pts.empty()) return 0.0;
  const int k = static_cast<int>(pts[0].size());
  if (static_cast<int>(pts.size()) < k + 1 || k == 1) {
    double lo = 0.0, hi = 0.0;
    if (k == 1 && !pts.empty()) {
      lo = hi = pts[0](0);
      for (const auto& q : pts) {
        lo = std::min(lo, q(0));
        hi = std::max(hi, q(0));
      }
    }
    if (volume_out) *volume_out = hi - lo;
    return hi - lo;
  }
  double scale = 0.0;
  for (const auto& q : pts) scale = std::max(scale, q.cwiseAbs().maxCoeff());
  scale = std::max(scale, 1e-30);

  for (int attempt = 0; attempt < 4; ++attempt) {
    if (planes_out) planes_out->clear();
    double v = attempt_hull(pts, scale, attempt, planes_out);
    if (v >= 0.0) {
      if (volume_out) *volume_out = v;
      return v;
    }
  }
  raise(ErrorCode::ConvergenceFailure, "convex hull construction failed after joggling");
}

}  // namespace

double hull_volume(const std::vector<Vec>& pts) { return run_hull(pts, nullptr, nullptr); }

std::vector<std::pair<Vec, double>> hull_facet_planes(const std::vector<Vec>& pts) {
  std::vector<std::pair<Vec, double>> planes;
  run_hull(pts, &planes, nullptr);
  return planes;
}

std::vector<Vec> hpolytope_vertices(const HalfspaceList& poly, int vertex_cap) {
  const int d = static_cast<int>(poly.normals.cols());
  const int m = static_cast<int>(poly.normals.rows());
  const double scale = 1.0 + poly.offsets.cwiseAbs().maxCoeff();

  double combos = 1.0;
  for (int i = 0; i < d; ++i) combos *= double(m - i) / double(i + 1);
  if (combos > 5e7)
    raise(ErrorCode::VertexEnumerationOverflow, "too many constraint subsets to enumerate");

  std::vector<Vec> verts;
  std::vector<int> combo(d);
  std::iota(combo.begin(), combo.end(), 0);

  auto advance = [&]() {
    int i = d - 1;
    while (i >= 0 && combo[i] == m - d + i) --i;
    if (i < 0) return false;
    ++combo[i];
    for (int j = i + 1; j < d; ++j) combo[j] = combo[j - 1] + 1;
    return true;
  };

  Mat A(d, d);
  Vec b(d);
  do {
    for (int i = 0; i < d; ++i) {
      A.row(i) = poly.normals.row(combo[i]);
      b(i) = poly.offsets(combo[i]);
    }
    Eigen::FullPivLU<Mat> lu(A);
    if (!lu.isInvertible()) continue;
    Vec x = lu.solve(b);
    if (((poly.normals * x - poly.offsets).array() > 1e-8 * scale).any()) continue;
    bool dup = false;
    for (const auto& v : verts)
      if ((v - x).cwiseAbs().maxCoeff() < 1e-8 * scale) {
        dup = true;
        break;
      }
    if (!dup) {
      verts.push_back(x);
      if (static_cast<int>(verts.size()) > vertex_cap)
        raise(ErrorCode::VertexEnumerationOverflow,
              "more than " + std::to_string(vertex_cap) + " vertices");
    }
  } while (advance());
  return verts;
}

}  // namespace polyapprox
