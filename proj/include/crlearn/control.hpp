#pragma once

#include <Eigen/Dense>

#include "crlearn/rng.hpp"

namespace crlearn {

using Vec = Eigen::VectorXd;

struct EpsilonSchedule {
  double d_th = 0.05;
};

/// Exploration probability from the relative localization bound
/// d_max / |g_est|. Throws Error(ZeroEstimate) for a zero estimate.
double epsilon(double d_max_val, double g_est_norm, const EpsilonSchedule& sched);

/// Capped multilevel waterfilling: maximizes sum log(1 + h_i p_i / n_i)
/// subject to g_est'p = 1 and 0 <= p <= p_max. Returns p_max when even full
/// power stays below the estimated threshold.
Vec exploit_waterfill(const Vec& g_est, const Vec& h, const Vec& noise, const Vec& p_max);

/// Uniform point on {p : g_est'p = 1, 0 <= p <= p_max}, via Hit-and-Run
/// inside the hyperplane. Throws Error(EmptySlice) when g_est'p_max < 1.
Vec explore_sample(const Vec& g_est, const Vec& p_max, Rng& rng, int walk_steps = 200);

/// sum log2(1 + h_i p_i / n_i), bits/s/Hz.
double capacity(const Vec& p, const Vec& h, const Vec& noise);

}  // namespace crlearn
