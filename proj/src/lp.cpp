#include "crlearn/lp.hpp"

#include <cmath>
#include <limits>
#include <vector>

#include "crlearn/error.hpp"

namespace crlearn {

namespace {

constexpr double kPivotTol = 1e-11;
constexpr int kDegenerateStreakForBland = 50;
constexpr int kRefactorInterval = 32;

struct PivotLimit {};

// Dense tableau over the dual: n constraint rows plus the reduced-cost row.
class DualTableau {
 public:
  DualTableau(const RowMatrix& A, const Eigen::VectorXd& c)
      : m_(static_cast<int>(A.rows())), n_(static_cast<int>(A.cols())),
        T_(RowMatrix::Zero(n_ + 1, m_ + n_ + 1)), basis_(static_cast<std::size_t>(n_)) {
    for (int r = 0; r < n_; ++r) {
      T_.row(r).head(m_) = A.col(r).transpose();
      T_(r, rhs()) = c(r);
      if (c(r) < 0.0) T_.row(r) *= -1.0;
      T_(r, m_ + r) = 1.0;
      basis_[static_cast<std::size_t>(r)] = m_ + r;
    }
    initial_ = T_.topRows(n_);
  }

  int rhs() const { return m_ + n_; }

  // Loads the objective row for the given column costs (size m + n).
  void price(const std::vector<double>& cost) {
    cost_ = cost;
    auto z = T_.row(n_);
    z.setZero();
    for (int j = 0; j < m_ + n_; ++j) z(j) = cost[static_cast<std::size_t>(j)];
    for (int r = 0; r < n_; ++r) {
      const double cb = cost[static_cast<std::size_t>(basis_[static_cast<std::size_t>(r)])];
      if (cb != 0.0) z -= cb * T_.row(r);
    }
  }

  double objective() const { return -T_(n_, rhs()); }

  // Runs primal simplex on columns [0, limit). Returns false if unbounded.
  bool optimize(int limit, int& pivots) {
    bool bland = false;
    int degenerate_streak = 0;
    int since_refactor = 0;
    const int max_pivots = 50 * (m_ + n_) + 1000;
    for (;;) {
      if (since_refactor >= kRefactorInterval) {
        refactor();
        since_refactor = 0;
      }
      const int enter = choose_entering(limit, bland);
      if (enter < 0) {
        // Confirm optimality on a freshly factored tableau.
        if (since_refactor == 0) return true;
        refactor();
        since_refactor = 0;
        continue;
      }
      const int leave = choose_leaving(enter);
      if (leave < 0) return false;
      const bool degenerate = T_(leave, rhs()) <= kLpTolerance;
      pivot(leave, enter);
      ++since_refactor;
      if (++pivots > max_pivots) throw PivotLimit{};
      degenerate_streak = degenerate ? degenerate_streak + 1 : 0;
      if (degenerate_streak >= kDegenerateStreakForBland) bland = true;
    }
  }

  // Replaces basic artificials by structural columns where possible.
  bool drive_out_artificials(int& pivots) {
    for (int r = 0; r < n_; ++r) {
      if (basis_[static_cast<std::size_t>(r)] < m_) continue;
      int best = -1;
      double best_abs = 1e-9;
      for (int j = 0; j < m_; ++j) {
        const double a = std::abs(T_(r, j));
        if (a > best_abs) {
          best_abs = a;
          best = j;
        }
      }
      if (best < 0) return false;
      pivot(r, best);
      ++pivots;
    }
    return true;
  }

  const std::vector<int>& basis() const { return basis_; }

 private:
  int choose_entering(int limit, bool bland) const {
    int best = -1;
    double best_val = -kLpTolerance;
    for (int j = 0; j < limit; ++j) {
      const double z = T_(n_, j);
      if (bland) {
        if (z < -kLpTolerance) return j;
      } else if (z < best_val) {
        best_val = z;
        best = j;
      }
    }
    return best;
  }

  int choose_leaving(int enter) const {
    int best = -1;
    double best_ratio = std::numeric_limits<double>::infinity();
    for (int r = 0; r < n_; ++r) {
      const double a = T_(r, enter);
      if (a <= kPivotTol) continue;
      const double ratio = std::max(T_(r, rhs()), 0.0) / a;
      if (ratio < best_ratio - 1e-12 ||
          (ratio <= best_ratio + 1e-12 && best >= 0 &&
           basis_[static_cast<std::size_t>(r)] < basis_[static_cast<std::size_t>(best)])) {
        best_ratio = std::min(best_ratio, ratio);
        best = r;
      }
    }
    return best;
  }

  // Recomputes the constraint rows as B^-1 times the initial rows, which
  // discards the round-off that pivoting accumulates, then reprices.
  void refactor() {
    Eigen::MatrixXd B(n_, n_);
    for (int r = 0; r < n_; ++r) B.col(r) = initial_.col(basis_[static_cast<std::size_t>(r)]);
    const Eigen::FullPivLU<Eigen::MatrixXd> lu(B);
    if (!lu.isInvertible()) return;
    T_.topRows(n_) = lu.solve(Eigen::MatrixXd(initial_));
    for (int r = 0; r < n_; ++r) {
      auto col = T_.col(basis_[static_cast<std::size_t>(r)]).head(n_);
      col.setZero();
      col(r) = 1.0;
    }
    price(cost_);
  }

  void pivot(int row, int col) {
    T_.row(row) /= T_(row, col);
    for (int r = 0; r <= n_; ++r) {
      if (r == row) continue;
      const double f = T_(r, col);
      if (f != 0.0) T_.row(r) -= f * T_.row(row);
    }
    basis_[static_cast<std::size_t>(row)] = col;
  }

  int m_;
  int n_;
  RowMatrix T_;
  std::vector<int> basis_;
  RowMatrix initial_;
  std::vector<double> cost_;
};

}  // namespace

namespace {

LpSolution solve(const RowMatrix& A, const Eigen::VectorXd& b, const Eigen::VectorXd& c) {
  const int m = static_cast<int>(A.rows());
  const int n = static_cast<int>(A.cols());
  DualTableau tab(A, c);
  LpSolution sol;

  std::vector<double> cost(static_cast<std::size_t>(m + n), 0.0);
  for (int j = m; j < m + n; ++j) cost[static_cast<std::size_t>(j)] = 1.0;
  tab.price(cost);
  tab.optimize(m, sol.pivots);
  if (tab.objective() > 1e-7 * (1.0 + c.lpNorm<Eigen::Infinity>())) {
    // Dual infeasible: with a non-empty feasible set the primal is unbounded.
    throw Error(ErrorCode::UnboundedLp, "LP objective is unbounded (or the set is empty)");
  }
  if (!tab.drive_out_artificials(sol.pivots)) {
    throw Error(ErrorCode::UnboundedLp, "LP constraint matrix is rank deficient");
  }

  for (int j = 0; j < m; ++j) cost[static_cast<std::size_t>(j)] = b(j);
  for (int j = m; j < m + n; ++j) cost[static_cast<std::size_t>(j)] = 0.0;
  tab.price(cost);
  if (!tab.optimize(m, sol.pivots)) {
    throw Error(ErrorCode::EmptyPolyhedron, "LP feasible set is empty");
  }

  Eigen::MatrixXd AB(n, n);
  Eigen::VectorXd bB(n);
  for (int r = 0; r < n; ++r) {
    const int i = tab.basis()[static_cast<std::size_t>(r)];
    AB.row(r) = A.row(i);
    bB(r) = b(i);
  }
  sol.x = AB.fullPivLu().solve(bB);
  sol.value = c.dot(sol.x);
  return sol;
}

}  // namespace

LpSolution maximize_lp(const RowMatrix& A, const Eigen::VectorXd& b, const Eigen::VectorXd& c) {
  const int m = static_cast<int>(A.rows());
  const int n = static_cast<int>(A.cols());
  if (b.size() != m || c.size() != n) throw std::invalid_argument("LP dimension mismatch");
  if (m == 0) throw Error(ErrorCode::UnboundedLp, "LP without constraints");
  try {
    return solve(A, b, c);
  } catch (const PivotLimit&) {
  }
  // Still cycling after Bland's rule and refactoring means the dual is badly
  // degenerate. A tiny deterministic tilt of the objective breaks the ties;
  // the vertex it finds is optimal for c up to that tilt.
  Eigen::VectorXd tilted = c;
  const double scale = 1e-10 * std::max(1.0, c.lpNorm<Eigen::Infinity>());
  for (int j = 0; j < n; ++j) tilted(j) += scale * (1.0 + std::fmod(0.618034 * (j + 1), 1.0));
  try {
    LpSolution sol = solve(A, b, tilted);
    sol.value = c.dot(sol.x);
    return sol;
  } catch (const PivotLimit&) {
    throw std::runtime_error("simplex failed to terminate");
  }
}

}  // namespace crlearn
