#pragma once

#include <cstdint>
#include <limits>
#include <vector>

#include "polyapprox/bodies.hpp"

namespace polyapprox {

/// Flat candidate cloud on the boundary of D = K + r B^d (r = 1 throughout
/// the library). Clouds reach millions of points, so coordinates are stored
/// as float32 blocks; accepted net centers are re-projected in double
/// precision downstream. Normals are (x - foot) / r.
struct BoundaryCloud {
  int dim = 0;
  double r = 1.0;
  std::vector<float> x;     // n * dim
  std::vector<float> foot;  // n * dim
  double gamma = std::numeric_limits<double>::infinity();  // certified covering radius
  // build parameters, kept so densify can rebuild at a smaller gamma
  uint64_t build_seed = 0;
  int oversample = 0;
  long max_candidates = 0;

  long size() const { return dim == 0 ? 0 : static_cast<long>(x.size()) / dim; }
  const float* xp(long i) const { return x.data() + i * dim; }
  const float* fp(long i) const { return foot.data() + i * dim; }
};

/// Candidate cloud with a certified covering radius <= gamma_target: a BFS
/// flood fill over grid cells of size ~gamma/sqrt(d) that touch the boundary
/// of D, radially projecting each cell center onto it (every projected point
/// is an outer_boundary_sample at its foot normal), plus `oversample` random
/// directions. The 1-Lipschitz distance function makes the covering bound
/// cell_diagonal/2 + cell_diagonal/2 <= gamma exact, not statistical.
/// Throws DensityViolation past max_candidates.
BoundaryCloud make_boundary_cloud(const ConvexBody& K, double gamma_target, int oversample,
                                  long max_candidates, uint64_t seed);

/// Rebuild to a smaller gamma_target (no-op when already dense enough).
void densify_boundary_cloud(const ConvexBody& K, BoundaryCloud& cloud, double gamma_target);

}  // namespace polyapprox
