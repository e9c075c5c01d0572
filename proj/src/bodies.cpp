#include "polyapprox/bodies.hpp"

#include <algorithm>
#include <cmath>

#include "polyapprox/lp.hpp"
#include "polyapprox/rng.hpp"

namespace polyapprox {
namespace {

void require_unit(const Vec& u) {
  if (std::abs(u.norm() - 1.0) > 1e-12)
    raise(ErrorCode::InvalidArgument, "direction must be a unit vector");
}

double lex_less(const Vec& a, const Vec& b) {
  for (int i = 0; i < a.size(); ++i) {
    if (a(i) < b(i)) return true;
    if (a(i) > b(i)) return false;
  }
  return false;
}

}  // namespace

ConvexBody::ConvexBody(int dim, Variant v) : dim_(dim), variant_(std::move(v)) {
  if (dim < 2 || dim > kMaxDim)
    raise(ErrorCode::InvalidArgument, "dimension must be in [2, " + std::to_string(kMaxDim) + "]");

  std::visit(
      [&](auto& spec) {
        using T = std::decay_t<decltype(spec)>;
        if constexpr (std::is_same_v<T, BallSpec>) {
          if (spec.center.size() != dim) raise(ErrorCode::InvalidArgument, "ball center dim mismatch");
          if (!(spec.radius > 0)) raise(ErrorCode::InvalidArgument, "ball radius must be positive");
        } else if constexpr (std::is_same_v<T, EllipsoidSpec>) {
          if (spec.center.size() != dim || spec.semi_axes.size() != dim)
            raise(ErrorCode::InvalidArgument, "ellipsoid dim mismatch");
          if (spec.semi_axes.minCoeff() <= 0)
            raise(ErrorCode::InvalidArgument, "ellipsoid semi-axes must be positive");
          if (spec.frame.rows() != dim || spec.frame.cols() != dim)
            raise(ErrorCode::InvalidArgument, "ellipsoid frame must be d x d");
          Mat gram = spec.frame.transpose() * spec.frame;
          if ((gram - Mat::Identity(dim, dim)).cwiseAbs().maxCoeff() > 1e-8)
            raise(ErrorCode::InvalidArgument, "ellipsoid frame must be orthonormal");
          // polish to machine-precision orthonormality
          Eigen::HouseholderQR<Mat> qr(spec.frame);
          Mat q = qr.householderQ();
          Mat r = qr.matrixQR().triangularView<Eigen::Upper>();
          for (int i = 0; i < dim; ++i)
            if (r(i, i) < 0) q.col(i) = -q.col(i);
          spec.frame = q;
        } else if constexpr (std::is_same_v<T, SegmentSpec>) {
          if (spec.a.size() != dim || spec.b.size() != dim)
            raise(ErrorCode::InvalidArgument, "segment dim mismatch");
          if ((spec.a - spec.b).norm() <= 0)
            raise(ErrorCode::InvalidArgument, "segment endpoints must be distinct");
        } else if constexpr (std::is_same_v<T, BoxSpec>) {
          if (spec.min_corner.size() != dim || spec.sides.size() != dim)
            raise(ErrorCode::InvalidArgument, "box dim mismatch");
          if (spec.sides.minCoeff() <= 0)
            raise(ErrorCode::InvalidArgument, "box sides must be positive");
        } else if constexpr (std::is_same_v<T, HalfspaceList>) {
          if (spec.normals.cols() != dim || spec.normals.rows() != spec.offsets.size() ||
              spec.normals.rows() == 0)
            raise(ErrorCode::InvalidArgument, "halfspace list shape mismatch");
          for (int i = 0; i < spec.normals.rows(); ++i) {
            double n = spec.normals.row(i).norm();
            if (n < 1e-12) raise(ErrorCode::InvalidArgument, "zero halfspace normal");
            if (std::abs(n - 1.0) > 1e-9)
              raise(ErrorCode::InvalidArgument, "halfspace normals must be unit vectors");
            spec.normals.row(i) /= n;
            spec.offsets(i) /= n;
          }
          // boundedness via finite support in the 2d axis directions; the
          // width h(e_j) + h(-e_j) must be positive somewhere (>= 2 points)
          double max_width = 0.0;
          for (int j = 0; j < dim; ++j) {
            double width = 0.0;
            for (double sgn : {1.0, -1.0}) {
              Vec c = Vec::Zero(dim);
              c(j) = sgn;
              LpResult r = lp_maximize(spec.normals, spec.offsets, c, 17);
              if (r.status == LpStatus::Unbounded)
                raise(ErrorCode::UnboundedBody, "halfspace intersection is unbounded");
              if (r.status == LpStatus::Infeasible)
                raise(ErrorCode::InvalidArgument, "halfspace intersection is empty");
              width += r.value;
            }
            max_width = std::max(max_width, width);
          }
          if (max_width <= 1e-12)
            raise(ErrorCode::InvalidArgument, "polytope degenerates to a single point");
        } else if constexpr (std::is_same_v<T, ScaledSpec>) {
          if (!spec.inner) raise(ErrorCode::InvalidArgument, "scaled body missing inner");
          if (spec.inner->dim() != dim) raise(ErrorCode::InvalidArgument, "scaled dim mismatch");
          if (!(spec.factor > 0)) raise(ErrorCode::InvalidArgument, "scale factor must be positive");
        } else if constexpr (std::is_same_v<T, BallSumSpec>) {
          if (!spec.inner) raise(ErrorCode::InvalidArgument, "ball sum missing inner");
          if (spec.inner->dim() != dim) raise(ErrorCode::InvalidArgument, "ball sum dim mismatch");
          if (spec.radius < 0) raise(ErrorCode::InvalidArgument, "ball sum radius must be >= 0");
        }
      },
      variant_);
}

const char* ConvexBody::variant_name() const {
  struct Visitor {
    const char* operator()(const BallSpec&) const { return "ball"; }
    const char* operator()(const EllipsoidSpec&) const { return "ellipsoid"; }
    const char* operator()(const SegmentSpec&) const { return "segment"; }
    const char* operator()(const BoxSpec&) const { return "box"; }
    const char* operator()(const HalfspaceList&) const { return "hpolytope"; }
    const char* operator()(const ScaledSpec&) const { return "scaled"; }
    const char* operator()(const BallSumSpec&) const { return "ballsum"; }
  };
  return std::visit(Visitor{}, variant_);
}

ConvexBody ConvexBody::ball(int dim, double radius) {
  return ConvexBody(dim, BallSpec{Vec::Zero(dim), radius});
}
ConvexBody ConvexBody::ball(Vec center, double radius) {
  int d = static_cast<int>(center.size());
  return ConvexBody(d, BallSpec{std::move(center), radius});
}
ConvexBody ConvexBody::ellipsoid(Vec semi_axes) {
  int d = static_cast<int>(semi_axes.size());
  return ConvexBody(d, EllipsoidSpec{Vec::Zero(d), std::move(semi_axes), Mat::Identity(d, d)});
}
ConvexBody ConvexBody::ellipsoid(Vec center, Vec semi_axes, Mat frame) {
  int d = static_cast<int>(center.size());
  return ConvexBody(d, EllipsoidSpec{std::move(center), std::move(semi_axes), std::move(frame)});
}
ConvexBody ConvexBody::segment(Vec a, Vec b) {
  int d = static_cast<int>(a.size());
  return ConvexBody(d, SegmentSpec{std::move(a), std::move(b)});
}
ConvexBody ConvexBody::box(Vec min_corner, Vec sides) {
  int d = static_cast<int>(min_corner.size());
  return ConvexBody(d, BoxSpec{std::move(min_corner), std::move(sides)});
}
ConvexBody ConvexBody::unit_cube(int dim) {
  return ConvexBody(dim, BoxSpec{Vec::Zero(dim), Vec::Ones(dim)});
}
ConvexBody ConvexBody::hpolytope(Mat normals, Vec offsets) {
  int d = static_cast<int>(normals.cols());
  return ConvexBody(d, HalfspaceList{std::move(normals), std::move(offsets)});
}
ConvexBody ConvexBody::scaled(ConvexBody inner, double factor) {
  int d = inner.dim();
  return ConvexBody(d, ScaledSpec{std::make_shared<ConvexBody>(std::move(inner)), factor});
}
ConvexBody ConvexBody::ball_sum(ConvexBody inner, double radius) {
  int d = inner.dim();
  return ConvexBody(d, BallSumSpec{std::make_shared<ConvexBody>(std::move(inner)), radius});
}

// --- support values ---------------------------------------------------------

namespace {

double support_value_impl(const ConvexBody& K, const Vec& u) {
  struct Visitor {
    const ConvexBody& K;
    const Vec& u;
    double operator()(const BallSpec& s) const { return s.center.dot(u) + s.radius; }
    double operator()(const EllipsoidSpec& s) const {
      Vec w = s.frame.transpose() * u;
      double q = (s.semi_axes.array() * w.array()).matrix().squaredNorm();
      return s.center.dot(u) + std::sqrt(q);
    }
    double operator()(const SegmentSpec& s) const { return std::max(s.a.dot(u), s.b.dot(u)); }
    double operator()(const BoxSpec& s) const {
      double h = s.min_corner.dot(u);
      for (int i = 0; i < u.size(); ++i) h += s.sides(i) * std::max(u(i), 0.0);
      return h;
    }
    double operator()(const HalfspaceList& s) const {
      LpResult r = lp_maximize(s.normals, s.offsets, u, 17);
      if (r.status == LpStatus::Unbounded)
        raise(ErrorCode::UnboundedBody, "support maximization diverges");
      if (r.status == LpStatus::Infeasible)
        raise(ErrorCode::InvalidArgument, "empty polytope");
      return r.value;
    }
    double operator()(const ScaledSpec& s) const { return s.factor * support_value_impl(*s.inner, u); }
    double operator()(const BallSumSpec& s) const { return support_value_impl(*s.inner, u) + s.radius; }
  };
  return std::visit(Visitor{K, u}, K.variant());
}

Vec support_point_impl(const ConvexBody& K, const Vec& u);

Vec hpoly_lex_support_point(const HalfspaceList& s, const Vec& u) {
  const int d = static_cast<int>(u.size());
  Mat A = s.normals;
  Vec b = s.offsets;
  auto append = [&](const Vec& row, double rhs) {
    A.conservativeResize(A.rows() + 1, Eigen::NoChange);
    A.row(A.rows() - 1) = row.transpose();
    b.conservativeResize(b.size() + 1);
    b(b.size() - 1) = rhs;
  };
  LpResult first = lp_maximize(A, b, u, 17);
  if (first.status == LpStatus::Unbounded)
    raise(ErrorCode::UnboundedBody, "support maximization diverges");
  if (first.status == LpStatus::Infeasible)
    raise(ErrorCode::InvalidArgument, "empty polytope");
  double h = first.value;
  append(-u, -(h - 1e-9 * (1.0 + std::abs(h))));  // pin near-optimality of <u, x>
  Vec x = first.x;
  for (int i = 0; i < d; ++i) {
    Vec c = Vec::Zero(d);
    c(i) = -1.0;  // minimize x_i
    LpResult r = lp_maximize(A, b, c, 17 + i);
    if (r.status != LpStatus::Optimal) break;  // numerically pinched; keep last x
    x = r.x;
    Vec row = Vec::Zero(d);
    row(i) = 1.0;
    append(row, x(i) + 1e-9 * (1.0 + std::abs(x(i))));
  }
  return x;
}

Vec support_point_impl(const ConvexBody& K, const Vec& u) {
  struct Visitor {
    const ConvexBody& K;
    const Vec& u;
    Vec operator()(const BallSpec& s) const { return s.center + s.radius * u; }
    Vec operator()(const EllipsoidSpec& s) const {
      Vec w = s.frame.transpose() * u;
      Vec aw = (s.semi_axes.array().square() * w.array()).matrix();
      double q = std::sqrt((s.semi_axes.array() * w.array()).matrix().squaredNorm());
      return s.center + s.frame * aw / q;
    }
    Vec operator()(const SegmentSpec& s) const {
      double da = s.a.dot(u), db = s.b.dot(u);
      double scale = 1.0 + std::max(std::abs(da), std::abs(db));
      if (std::abs(da - db) <= 1e-12 * scale)  // tie: lexicographically smaller endpoint
        return lex_less(s.a, s.b) ? s.a : s.b;
      return da > db ? s.a : s.b;
    }
    Vec operator()(const BoxSpec& s) const {
      Vec p = s.min_corner;
      for (int i = 0; i < u.size(); ++i)
        if (u(i) > 1e-13) p(i) += s.sides(i);  // u_i <= 0 keeps the min corner (lex rule)
      return p;
    }
    Vec operator()(const HalfspaceList& s) const { return hpoly_lex_support_point(s, u); }
    Vec operator()(const ScaledSpec& s) const { return s.factor * support_point_impl(*s.inner, u); }
    Vec operator()(const BallSumSpec& s) const {
      return support_point_impl(*s.inner, u) + s.radius * u;
    }
  };
  return std::visit(Visitor{K, u}, K.variant());
}

Vec project_impl(const ConvexBody& K, const Vec& x);

Vec project_ellipsoid(const EllipsoidSpec& s, const Vec& x) {
  const int d = static_cast<int>(x.size());
  Vec y = s.frame.transpose() * (x - s.center);
  double inside = 0.0;
  for (int i = 0; i < d; ++i) inside += (y(i) / s.semi_axes(i)) * (y(i) / s.semi_axes(i));
  if (inside <= 1.0) return x;
  // Lagrange multiplier equation: sum a_i^2 y_i^2 / (a_i^2 + lambda)^2 = 1,
  // strictly decreasing in lambda; root lies in (0, |a .* y|).
  double hi = 0.0;
  for (int i = 0; i < d; ++i) hi += s.semi_axes(i) * s.semi_axes(i) * y(i) * y(i);
  hi = std::sqrt(hi);
  double lo = 0.0;
  auto f = [&](double lam) {
    double v = 0.0;
    for (int i = 0; i < d; ++i) {
      double a2 = s.semi_axes(i) * s.semi_axes(i);
      v += a2 * y(i) * y(i) / ((a2 + lam) * (a2 + lam));
    }
    return v;
  };
  for (int it = 0; it < 200 && (hi - lo) > 1e-12 * (1.0 + hi); ++it) {
    double mid = 0.5 * (lo + hi);
    if (f(mid) > 1.0) lo = mid;
    else hi = mid;
  }
  double lam = 0.5 * (lo + hi);
  Vec z(d);
  for (int i = 0; i < d; ++i)
    z(i) = s.semi_axes(i) * s.semi_axes(i) * y(i) / (s.semi_axes(i) * s.semi_axes(i) + lam);
  return s.center + s.frame * z;
}

Vec project_hpolytope(const HalfspaceList& s, const Vec& x0) {
  const int m = static_cast<int>(s.normals.rows());
  double scale = 1.0 + x0.cwiseAbs().maxCoeff() + s.offsets.cwiseAbs().maxCoeff();
  Vec resid = s.normals * x0 - s.offsets;
  if (resid.maxCoeff() <= 1e-12 * scale) return x0;
  // Dykstra's alternating projections onto the halfspaces
  Vec x = x0;
  Mat p = Mat::Zero(m, x0.size());
  const int max_sweeps = 10000;
  for (int sweep = 0; sweep < max_sweeps; ++sweep) {
    double moved = 0.0;
    for (int i = 0; i < m; ++i) {
      Vec y = x + p.row(i).transpose();
      double viol = s.normals.row(i).dot(y) - s.offsets(i);
      Vec xn = viol > 0 ? Vec(y - viol * s.normals.row(i).transpose()) : y;
      p.row(i) = (y - xn).transpose();
      moved = std::max(moved, (xn - x).cwiseAbs().maxCoeff());
      x = xn;
    }
    double max_viol = (s.normals * x - s.offsets).maxCoeff();
    if (max_viol <= 1e-11 * scale && moved <= 1e-12 * scale) return x;
  }
  raise(ErrorCode::ConvergenceFailure, "polytope projection exceeded iteration cap");
}

Vec project_impl(const ConvexBody& K, const Vec& x) {
  struct Visitor {
    const ConvexBody& K;
    const Vec& x;
    Vec operator()(const BallSpec& s) const {
      Vec dxv = x - s.center;
      double n = dxv.norm();
      if (n <= s.radius) return x;
      return s.center + (s.radius / n) * dxv;
    }
    Vec operator()(const EllipsoidSpec& s) const { return project_ellipsoid(s, x); }
    Vec operator()(const SegmentSpec& s) const {
      Vec ab = s.b - s.a;
      double t = (x - s.a).dot(ab) / ab.squaredNorm();
      t = std::clamp(t, 0.0, 1.0);
      return s.a + t * ab;
    }
    Vec operator()(const BoxSpec& s) const {
      Vec p = x;
      for (int i = 0; i < x.size(); ++i)
        p(i) = std::clamp(x(i), s.min_corner(i), s.min_corner(i) + s.sides(i));
      return p;
    }
    Vec operator()(const HalfspaceList& s) const { return project_hpolytope(s, x); }
    Vec operator()(const ScaledSpec& s) const {
      return s.factor * project_impl(*s.inner, x / s.factor);
    }
    Vec operator()(const BallSumSpec& s) const {
      Vec p = project_impl(*s.inner, x);
      Vec dxv = x - p;
      double n = dxv.norm();
      if (n <= s.radius) return x;
      return p + (s.radius / n) * dxv;
    }
  };
  return std::visit(Visitor{K, x}, K.variant());
}

}  // namespace

double support_value(const ConvexBody& K, const Vec& u) {
  require_unit(u);
  return support_value_impl(K, u);
}

double support_value_hom(const ConvexBody& K, const Vec& u) {
  double n = u.norm();
  if (n == 0.0) return 0.0;
  return n * support_value_impl(K, Vec(u / n));
}

Vec support_point(const ConvexBody& K, const Vec& u) {
  require_unit(u);
  return support_point_impl(K, u);
}

Vec project_onto(const ConvexBody& K, const Vec& x) { return project_impl(K, x); }

double dist_to(const ConvexBody& K, const Vec& x) { return (x - project_impl(K, x)).norm(); }

OuterBoundaryPoint outer_boundary_sample(const ConvexBody& K, double r, const Vec& u) {
  require_unit(u);
  if (!(r > 0)) raise(ErrorCode::InvalidArgument, "outer radius must be positive");
  OuterBoundaryPoint p;
  p.foot = support_point_impl(K, u);
  p.x = p.foot + r * u;
  p.normal = u;
  return p;
}

std::vector<Vec> sample_unit_directions(int dim, int count, uint64_t seed) {
  if (count < 1) raise(ErrorCode::InvalidArgument, "count must be >= 1");
  Rng rng(seed);
  std::vector<Vec> out;
  out.reserve(count);
  for (int i = 0; i < count; ++i) {
    Vec v(dim);
    double n = 0.0;
    do {
      for (int j = 0; j < dim; ++j) v(j) = rng.normal();
      n = v.norm();
    } while (n < 1e-12);
    out.push_back(v / n);
  }
  return out;
}

void bounding_box(const ConvexBody& K, double margin, Vec& lo, Vec& hi) {
  const int d = K.dim();
  lo.resize(d);
  hi.resize(d);
  Vec u = Vec::Zero(d);
  for (int i = 0; i < d; ++i) {
    u(i) = 1.0;
    hi(i) = support_value_impl(K, u) + margin;
    u(i) = -1.0;
    lo(i) = -support_value_impl(K, u) - margin;
    u(i) = 0.0;
  }
}

}  // namespace polyapprox
