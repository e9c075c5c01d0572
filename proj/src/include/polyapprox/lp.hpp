#pragma once

#include <Eigen/Dense>
#include <cstdint>

namespace polyapprox {

enum class LpStatus { Optimal, Infeasible, Unbounded };

struct LpResult {
  LpStatus status = LpStatus::Infeasible;
  Eigen::VectorXd x;
  double value = 0.0;
};

// Maximize c.x subject to A x <= b, rows of A need not be normalized.
// Seidel's randomized incremental algorithm for fixed small dimension
// (d <= 6 here). A synthetic box |x_i| <= bound keeps every subproblem
// bounded; hitting the box at the optimum is reported as Unbounded.
LpResult lp_maximize(const Eigen::MatrixXd& A, const Eigen::VectorXd& b,
                     const Eigen::VectorXd& c, uint64_t seed = 0,
                     double bound = 1e8);

}  // namespace polyapprox
