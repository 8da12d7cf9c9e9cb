#include "crlearn/control.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <vector>

#include "crlearn/error.hpp"

namespace crlearn {

namespace {

constexpr double kNegligibleGain = 1e-12;

struct Waterfill {
  const Vec& g;
  const Vec& level_offset;  // noise_i / h_i
  const Vec& p_max;
  const std::vector<bool>& active;

  double power(Eigen::Index i, double lambda) const {
    const double p = 1.0 / (lambda * g(i)) - level_offset(i);
    return std::clamp(p, 0.0, p_max(i));
  }

  double load(double lambda) const {
    double sum = 0.0;
    for (Eigen::Index i = 0; i < g.size(); ++i) {
      if (active[static_cast<std::size_t>(i)]) sum += g(i) * power(i, lambda);
    }
    return sum;
  }
};

}  // namespace

double epsilon(double d_max_val, double g_est_norm, const EpsilonSchedule& sched) {
  if (g_est_norm == 0.0) throw Error(ErrorCode::ZeroEstimate, "estimate has zero norm");
  const double d_rel = d_max_val / g_est_norm;
  return d_rel > sched.d_th ? 1.0 - sched.d_th / d_rel : 0.0;
}

Vec exploit_waterfill(const Vec& g_est, const Vec& h, const Vec& noise, const Vec& p_max) {
  const Eigen::Index n = g_est.size();
  Vec p = p_max;
  if (g_est.dot(p_max) <= 1.0) return p;

  std::vector<bool> active(static_cast<std::size_t>(n));
  double budget = 1.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    active[static_cast<std::size_t>(i)] = g_est(i) >= kNegligibleGain;
    if (!active[static_cast<std::size_t>(i)]) budget -= g_est(i) * p_max(i);
  }
  const Vec offset = noise.cwiseQuotient(h);
  const Waterfill wf{g_est, offset, p_max, active};

  double lo = 1e-12;
  double hi = 1.0;
  for (int i = 0; i < 200 && wf.load(hi) >= budget; ++i) hi *= 2.0;
  for (int i = 0; i < 200; ++i) {
    const double mid = std::sqrt(lo * hi);
    if (wf.load(mid) >= budget) {
      lo = mid;
    } else {
      hi = mid;
    }
    if (hi / lo - 1.0 < 1e-15) break;
  }
  double lambda = std::sqrt(lo * hi);

  // Closed-form multiplier for the active set found by bisection; exact
  // equality on the estimated constraint when the branches stay consistent.
  int free_count = 0;
  double rest = budget;
  for (Eigen::Index i = 0; i < n; ++i) {
    if (!active[static_cast<std::size_t>(i)]) continue;
    const double pi = wf.power(i, lambda);
    if (pi >= p_max(i)) {
      rest -= g_est(i) * p_max(i);
    } else if (pi > 0.0) {
      ++free_count;
      rest += g_est(i) * offset(i);
    }
  }
  if (free_count > 0 && rest > 0.0) {
    const double exact = free_count / rest;
    bool consistent = true;
    for (Eigen::Index i = 0; i < n && consistent; ++i) {
      if (!active[static_cast<std::size_t>(i)]) continue;
      const double raw_old = 1.0 / (lambda * g_est(i)) - offset(i);
      const double raw_new = 1.0 / (exact * g_est(i)) - offset(i);
      const bool free_old = raw_old > 0.0 && raw_old < p_max(i);
      const bool free_new = raw_new > 0.0 && raw_new < p_max(i);
      consistent = free_old == free_new;
    }
    if (consistent) lambda = exact;
  }
  for (Eigen::Index i = 0; i < n; ++i) {
    if (active[static_cast<std::size_t>(i)]) p(i) = wf.power(i, lambda);
  }
  return p;
}

Vec explore_sample(const Vec& g_est, const Vec& p_max, Rng& rng, int walk_steps) {
  const double full = g_est.dot(p_max);
  if (full < 1.0) {
    throw Error(ErrorCode::EmptySlice, "estimated constraint cannot be reached at full power");
  }
  Vec x = p_max / full;
  const Eigen::Index n = g_est.size();
  if (n == 1 || full == 1.0) return x;

  const Vec normal = g_est.normalized();
  std::normal_distribution<double> gauss;
  Vec d(n);
  for (int step = 0; step < walk_steps; ++step) {
    do {
      for (Eigen::Index i = 0; i < n; ++i) d(i) = gauss(rng);
      d -= d.dot(normal) * normal;
    } while (d.squaredNorm() < 1e-24);
    d.normalize();
    double lo = -std::numeric_limits<double>::infinity();
    double hi = std::numeric_limits<double>::infinity();
    for (Eigen::Index i = 0; i < n; ++i) {
      if (d(i) > 0.0) {
        hi = std::min(hi, (p_max(i) - x(i)) / d(i));
        lo = std::max(lo, -x(i) / d(i));
      } else if (d(i) < 0.0) {
        hi = std::min(hi, -x(i) / d(i));
        lo = std::max(lo, (p_max(i) - x(i)) / d(i));
      }
    }
    if (!(hi > lo)) continue;
    x += (lo + uniform01(rng) * (hi - lo)) * d;
  }
  x += (1.0 - g_est.dot(x)) / g_est.squaredNorm() * g_est;
  return x.cwiseMax(0.0).cwiseMin(p_max);
}

double capacity(const Vec& p, const Vec& h, const Vec& noise) {
  double sum = 0.0;
  for (Eigen::Index i = 0; i < p.size(); ++i) sum += std::log2(1.0 + h(i) * p(i) / noise(i));
  return sum;
}

}  // namespace crlearn
