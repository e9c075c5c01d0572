#pragma once

#include <Eigen/Dense>
#include <memory>
#include <string>
#include <variant>
#include <vector>

#include "polyapprox/errors.hpp"

namespace polyapprox {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

// ---------------------------------------------------------------------------
// Convex body descriptions. Immutable value types; all geometry downstream
// is oracle-based (support values/points and nearest-point projection).
// ---------------------------------------------------------------------------

struct BallSpec {
  Vec center;
  double radius = 1.0;
};

struct EllipsoidSpec {
  Vec center;
  Vec semi_axes;  // all > 0
  Mat frame;      // orthonormal columns; axis i points along frame.col(i)
};

struct SegmentSpec {
  Vec a, b;  // distinct endpoints
};

struct BoxSpec {
  Vec min_corner;
  Vec sides;  // all > 0
};

struct HalfspaceList {
  Mat normals;  // rows are unit normals a_i
  Vec offsets;  // <x, a_i> <= b_i
};

class ConvexBody;

struct ScaledSpec {
  std::shared_ptr<const ConvexBody> inner;
  double factor = 1.0;  // > 0, scaling about the origin
};

struct BallSumSpec {
  std::shared_ptr<const ConvexBody> inner;
  double radius = 0.0;  // >= 0
};

constexpr int kMaxDim = 6;  // net sizes ~ delta^-(d-1), constants ~ 4^d

/// A compact convex set with at least two points, dim in [2, 6].
/// Construction validates the variant invariants (HPolytope boundedness via
/// finite support values in the 2d axis directions).
class ConvexBody {
 public:
  using Variant = std::variant<BallSpec, EllipsoidSpec, SegmentSpec, BoxSpec,
                               HalfspaceList, ScaledSpec, BallSumSpec>;

  ConvexBody(int dim, Variant v);

  int dim() const { return dim_; }
  const Variant& variant() const { return variant_; }
  const char* variant_name() const;

  template <typename T>
  const T* get_if() const { return std::get_if<T>(&variant_); }

  // convenience constructors
  static ConvexBody ball(int dim, double radius = 1.0);
  static ConvexBody ball(Vec center, double radius);
  static ConvexBody ellipsoid(Vec semi_axes);  // origin-centered, axis-aligned
  static ConvexBody ellipsoid(Vec center, Vec semi_axes, Mat frame);
  static ConvexBody segment(Vec a, Vec b);
  static ConvexBody box(Vec min_corner, Vec sides);
  static ConvexBody unit_cube(int dim);
  static ConvexBody hpolytope(Mat normals, Vec offsets);
  static ConvexBody scaled(ConvexBody inner, double factor);
  static ConvexBody ball_sum(ConvexBody inner, double radius);

 private:
  int dim_;
  Variant variant_;
};

/// Point on the boundary of the outer parallel body K + r B^d together with
/// its nearest point on K and the shared unit normal.
struct OuterBoundaryPoint {
  Vec x;       // on the boundary of K + r B^d
  Vec foot;    // nearest point of K to x
  Vec normal;  // (x - foot) / r
};

// --- support / projection oracles -----------------------------------------

/// h_K(u) = max_{x in K} <x, u>. Requires |u| = 1 within 1e-12.
double support_value(const ConvexBody& K, const Vec& u);

/// 1-homogeneous extension of the support function (u need not be unit).
double support_value_hom(const ConvexBody& K, const Vec& u);

/// A point of K attaining h_K(u); ties resolved to the lexicographically
/// smallest extreme point of the argmax face.
Vec support_point(const ConvexBody& K, const Vec& u);

/// Nearest point of K to x (x itself when x lies in K).
Vec project_onto(const ConvexBody& K, const Vec& x);

/// Squared distance from x to K.
double dist_to(const ConvexBody& K, const Vec& x);

/// support_point(K,u) + r u, with foot and normal attached.
OuterBoundaryPoint outer_boundary_sample(const ConvexBody& K, double r, const Vec& u);

/// `count` i.i.d. uniform directions on S^{d-1} (normalized Gaussians);
/// deterministic for a fixed seed.
std::vector<Vec> sample_unit_directions(int dim, int count, uint64_t seed);

/// Axis-aligned bounding box of K (+margin on every side), via support values.
void bounding_box(const ConvexBody& K, double margin, Vec& lo, Vec& hi);

}  // namespace polyapprox
