#pragma once

#include <Eigen/Dense>

namespace crlearn {

using RowMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

struct LpSolution {
  double value = 0.0;
  Eigen::VectorXd x;
  int pivots = 0;
};

inline constexpr double kLpTolerance = 1e-9;

/// maximize c'x subject to A x <= b, x free.
///
/// Works on the dual (min b'y, A'y = c, y >= 0) with a dense tableau of
/// n + 1 rows, which keeps pivots cheap when there are many more constraints
/// than variables. Dantzig pricing switches to Bland's rule after a run of
/// degenerate pivots. The primal optimum is recovered from the optimal basis
/// by solving the n active constraints exactly.
///
/// Throws Error(EmptyPolyhedron) when the feasible set is empty and
/// Error(UnboundedLp) when the objective is unbounded.
LpSolution maximize_lp(const RowMatrix& A, const Eigen::VectorXd& b, const Eigen::VectorXd& c);

}  // namespace crlearn
