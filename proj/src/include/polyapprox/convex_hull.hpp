#pragma once

#include <Eigen/Dense>
#include <vector>

#include "polyapprox/bodies.hpp"

namespace polyapprox {

/// Volume of the convex hull of `pts` in their ambient dimension (<= 6).
/// Returns 0 when the points are not full-dimensional. Input is joggled by a
/// deterministic ~1e-11-relative perturbation for robustness on degenerate
/// (cospherical / coplanar) configurations, which perturbs the volume at the
/// same relative order.
double hull_volume(const std::vector<Vec>& pts);

/// Vertices of a bounded halfspace intersection by enumeration of d-subsets
/// of the constraints. Throws VertexEnumerationOverflow past `vertex_cap`.
std::vector<Vec> hpolytope_vertices(const HalfspaceList& poly, int vertex_cap = 100000);

/// Outward facet planes (normal, offset) of the hull of `pts`, outward with
/// respect to an interior point; triangulation of higher-degree facets gives
/// near-duplicate planes, which callers dedupe as needed. Empty when the
/// points are not full-dimensional.
std::vector<std::pair<Vec, double>> hull_facet_planes(const std::vector<Vec>& pts);

}  // namespace polyapprox
