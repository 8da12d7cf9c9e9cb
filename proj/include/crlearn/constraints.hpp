#pragma once

#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "crlearn/acm.hpp"

namespace crlearn {

using Vec = Eigen::VectorXd;

/// Linear-scale ratios c_j relative to the reference level; c_ref = 1.
struct GammaRatios {
  int ref_index = 0;
  std::vector<double> c;  // c[j] for j = 1..ref_index; c[0] unused

  double at(int level) const;
};

/// c_j = 10^((gamma_j - gamma_ref)/10) over the whole ladder.
GammaRatios gamma_ratios(const AcmProtocol& protocol, int ref_index);

/// c_j = I_th_ref / I_th_j derived from the PU's nominal clear-channel SINR;
/// defined for j <= ref_index. Unlike gamma_ratios these keep the cuts
/// consistent with the true gains at finite SNR.
GammaRatios threshold_ratios(const AcmProtocol& protocol, int ref_index,
                             double clear_sinr_db);

/// Knowledge from one probe: g~' upper > 1 and g~' lower <= 1.
struct InequalityPair {
  int flop = 0;
  std::optional<Vec> upper;
  std::optional<Vec> lower;
};

/// Multilevel feedback. Throws Error(ObservedAboveReference) when the observed
/// level is above the reference.
InequalityPair feedback_to_pair(const Vec& p, int observed_mcs, const GammaRatios& ratios,
                                int flop);

/// ACK/NACK-equivalent feedback: a single cut at p.
InequalityPair binary_to_pair(const Vec& p, bool degraded, int flop);

struct ConstraintSet {
  std::vector<InequalityPair> pairs;
  double prior_g_ub = 1.0;

  /// Appends; flop indices must be strictly increasing.
  void add(InequalityPair pair);
  void drop_newest();
};

/// Keeps pairs whose flop lies in [t - t_w, t].
ConstraintSet window_filter(const ConstraintSet& set, int t, int t_w);

/// Number of stored inequalities violated by g (relative tolerance on the
/// unit right-hand side).
int count_violations(const ConstraintSet& set, const Vec& g, double rel_tol);

}  // namespace crlearn
