#pragma once

// Brute-force reference computations used to check the library. None of these
// share code with the implementation under test.

#include <cmath>
#include <functional>
#include <limits>
#include <optional>
#include <vector>

#include <Eigen/Dense>

namespace oracle {

using Mat = Eigen::MatrixXd;
using Vec = Eigen::VectorXd;

// Max of c'x over {A x <= b} by enumerating every vertex. Returns nullopt
// when no vertex is feasible. Only sensible for a handful of rows in 2-D/3-D.
inline std::optional<double> lp_by_vertices(const Mat& A, const Vec& b, const Vec& c,
                                            double tol = 1e-9) {
  const int m = static_cast<int>(A.rows());
  const int n = static_cast<int>(A.cols());
  std::optional<double> best;
  std::vector<int> pick(static_cast<std::size_t>(n));
  std::function<void(int, int)> rec = [&](int start, int depth) {
    if (depth == n) {
      Mat M(n, n);
      Vec r(n);
      for (int k = 0; k < n; ++k) {
        M.row(k) = A.row(pick[static_cast<std::size_t>(k)]);
        r(k) = b(pick[static_cast<std::size_t>(k)]);
      }
      Eigen::FullPivLU<Mat> lu(M);
      if (lu.rank() < n) return;
      const Vec x = lu.solve(r);
      if (((A * x - b).array() > tol).any()) return;
      const double v = c.dot(x);
      if (!best || v > *best) best = v;
      return;
    }
    for (int i = start; i < m; ++i) {
      pick[static_cast<std::size_t>(depth)] = i;
      rec(i + 1, depth + 1);
    }
  };
  rec(0, 0);
  return best;
}

// Golden-section search for the minimizer of a unimodal f on [lo, hi].
inline double golden_min(const std::function<double(double)>& f, double lo, double hi,
                         int iters = 200) {
  const double phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = lo, b = hi;
  double x1 = b - phi * (b - a), x2 = a + phi * (b - a);
  double f1 = f(x1), f2 = f(x2);
  for (int i = 0; i < iters; ++i) {
    if (f1 < f2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - phi * (b - a);
      f1 = f(x1);
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + phi * (b - a);
      f2 = f(x2);
    }
  }
  return 0.5 * (a + b);
}

// Largest distance from c to any of the 2^N corners of [lo, hi].
inline double farthest_corner(const Vec& c, const Vec& lo, const Vec& hi) {
  const int n = static_cast<int>(c.size());
  double best = 0.0;
  for (unsigned long mask = 0; mask < (1ul << n); ++mask) {
    double d2 = 0.0;
    for (int i = 0; i < n; ++i) {
      const double corner = (mask >> i) & 1ul ? hi(i) : lo(i);
      d2 += (corner - c(i)) * (corner - c(i));
    }
    best = std::max(best, std::sqrt(d2));
  }
  return best;
}

// Sum of log2(1 + h p / n).
inline double shannon(const Vec& p, const Vec& h, const Vec& noise) {
  double s = 0.0;
  for (Eigen::Index i = 0; i < p.size(); ++i) s += std::log2(1.0 + h(i) * p(i) / noise(i));
  return s;
}

// Maximum tolerable interference (mW) for a required SINR gamma_db, from
// rx / (I + N) = gamma solved directly in linear units.
inline double threshold_mw(double rx_dbm, double noise_dbm, double gamma_db) {
  const double rx = std::pow(10.0, rx_dbm / 10.0);
  const double noise = std::pow(10.0, noise_dbm / 10.0);
  return rx / std::pow(10.0, gamma_db / 10.0) - noise;
}

}  // namespace oracle
