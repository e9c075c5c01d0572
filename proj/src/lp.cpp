#include "polyapprox/lp.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "polyapprox/rng.hpp"

namespace polyapprox {
namespace {

constexpr double kFeasTol = 1e-9;

struct SubResult {
  bool feasible = true;
  Eigen::VectorXd x;
};

// Maximize c.x over { A x <= b } intersected with the box |x_i| <= bound.
// Constraints are processed in the (already shuffled) order given; the box
// provides the initial optimum. Returns infeasible when the intersection is
// empty within tolerance.
SubResult seidel(const Eigen::MatrixXd& A, const Eigen::VectorXd& b,
                 const Eigen::VectorXd& c, double bound, Rng& rng) {
  const int d = static_cast<int>(c.size());
  const int m = static_cast<int>(A.rows());

  if (d == 1) {
    double lo = -bound, hi = bound;
    for (int i = 0; i < m; ++i) {
      double a = A(i, 0), beta = b(i);
      double tol = kFeasTol * (1.0 + std::abs(beta));
      if (std::abs(a) < 1e-14) {
        if (beta < -tol) return {false, {}};
        continue;
      }
      if (a > 0) hi = std::min(hi, beta / a);
      else lo = std::max(lo, beta / a);
    }
    if (lo > hi + kFeasTol * (1.0 + std::min(std::abs(lo), std::abs(hi)))) return {false, {}};
    SubResult r;
    r.x = Eigen::VectorXd::Constant(1, c(0) >= 0 ? hi : lo);
    return r;
  }

  // start at the box corner maximizing the objective
  Eigen::VectorXd x(d);
  for (int j = 0; j < d; ++j) x(j) = c(j) >= 0 ? bound : -bound;

  std::vector<int> order(m);
  std::iota(order.begin(), order.end(), 0);
  rng.shuffle(order);

  for (int step = 0; step < m; ++step) {
    const int i = order[step];
    const double viol = A.row(i).dot(x) - b(i);
    const double tol = kFeasTol * (1.0 + std::abs(b(i))) +
                       1e-13 * A.row(i).cwiseAbs().sum() * x.cwiseAbs().maxCoeff();
    if (viol <= tol) continue;

    Eigen::VectorXd arow = A.row(i).transpose();
    double anorm = arow.cwiseAbs().maxCoeff();
    if (anorm < 1e-14) return {false, {}};  // 0.x <= b with b violated

    // optimum lies on a.x = b(i); eliminate the largest-coefficient variable
    int piv = 0;
    arow.cwiseAbs().maxCoeff(&piv);
    const double apiv = arow(piv);
    auto drop = [&](const Eigen::VectorXd& v) {
      Eigen::VectorXd w(d - 1);
      for (int j = 0, t = 0; j < d; ++j)
        if (j != piv) w(t++) = v(j);
      return w;
    };

    // substitute x_piv = (b_i - sum_{j != piv} a_j x_j) / a_piv into the
    // first `step` constraints, the box rows of x_piv, and the objective
    std::vector<Eigen::VectorXd> rows;
    std::vector<double> rhs;
    rows.reserve(step + 2);
    for (int s = 0; s < step; ++s) {
      const int k = order[s];
      const double f = A(k, piv) / apiv;
      Eigen::VectorXd r = drop(A.row(k).transpose() - f * arow);
      rows.push_back(std::move(r));
      rhs.push_back(b(k) - f * b(i));
    }
    {  // |x_piv| <= bound becomes two general rows
      const double f = 1.0 / apiv;
      rows.push_back(drop(-f * arow));
      rhs.push_back(bound - f * b(i));
      rows.push_back(drop(f * arow));
      rhs.push_back(bound + f * b(i));
    }
    Eigen::VectorXd csub = drop(c - (c(piv) / apiv) * arow);

    Eigen::MatrixXd Asub(rows.size(), d - 1);
    Eigen::VectorXd bsub(rows.size());
    for (size_t r = 0; r < rows.size(); ++r) {
      Asub.row(r) = rows[r].transpose();
      bsub(r) = rhs[r];
    }
    SubResult sub = seidel(Asub, bsub, csub, bound, rng);
    if (!sub.feasible) return {false, {}};

    Eigen::VectorXd full(d);
    double acc = b(i);
    for (int j = 0, t = 0; j < d; ++j) {
      if (j == piv) continue;
      full(j) = sub.x(t);
      acc -= arow(j) * sub.x(t);
      ++t;
    }
    full(piv) = acc / apiv;
    x = full;
  }
  SubResult r;
  r.x = x;
  return r;
}

}  // namespace

LpResult lp_maximize(const Eigen::MatrixXd& A, const Eigen::VectorXd& b,
                     const Eigen::VectorXd& c, uint64_t seed, double bound) {
  Rng rng(seed ^ 0x5e1de1ULL);
  SubResult s = seidel(A, b, c, bound, rng);
  LpResult out;
  if (!s.feasible) {
    out.status = LpStatus::Infeasible;
    return out;
  }
  // optimum pinned to the synthetic box means the true problem is unbounded
  // in the objective direction (or has an enormous feasible set; our data
  // lives at O(10), so the distinction does not arise)
  for (int j = 0; j < c.size(); ++j) {
    if (std::abs(c(j)) > 1e-13 && std::abs(s.x(j)) >= bound * (1.0 - 1e-6)) {
      out.status = LpStatus::Unbounded;
      return out;
    }
  }
  out.status = LpStatus::Optimal;
  out.x = s.x;
  out.value = c.dot(s.x);
  return out;
}

}  // namespace polyapprox
