#include "crlearn/constraints.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "crlearn/error.hpp"
#include "crlearn/units.hpp"

namespace crlearn {

double GammaRatios::at(int level) const {
  if (level < 1 || level >= static_cast<int>(c.size())) {
    throw std::out_of_range("gamma ratio for level " + std::to_string(level) + " not defined");
  }
  return c[static_cast<std::size_t>(level)];
}

GammaRatios gamma_ratios(const AcmProtocol& protocol, int ref_index) {
  if (ref_index < 1 || ref_index > protocol.levels()) {
    throw Error(ErrorCode::InvalidConfig, "reference MCS level out of range");
  }
  GammaRatios r;
  r.ref_index = ref_index;
  r.c.assign(static_cast<std::size_t>(protocol.levels()) + 1, 0.0);
  const double ref_db = protocol.gamma_db(ref_index);
  for (int j = 1; j <= protocol.levels(); ++j) {
    r.c[static_cast<std::size_t>(j)] = db_to_linear(protocol.gamma_db(j) - ref_db);
  }
  r.c[static_cast<std::size_t>(ref_index)] = 1.0;
  return r;
}

GammaRatios threshold_ratios(const AcmProtocol& protocol, int ref_index, double clear_sinr_db) {
  if (ref_index < 1 || ref_index > protocol.levels()) {
    throw Error(ErrorCode::InvalidConfig, "reference MCS level out of range");
  }
  // With S/N = s, I_th_j / N = s / gamma_j - 1.
  const double s = db_to_linear(clear_sinr_db);
  auto headroom = [&](int j) { return s / db_to_linear(protocol.gamma_db(j)) - 1.0; };
  const double ref = headroom(ref_index);
  if (!(ref > 0.0)) {
    throw Error(ErrorCode::NonPositiveThreshold,
                "clear-channel SINR leaves no interference margin at the reference MCS");
  }
  GammaRatios r;
  r.ref_index = ref_index;
  r.c.assign(static_cast<std::size_t>(ref_index) + 1, 0.0);
  for (int j = 1; j <= ref_index; ++j) r.c[static_cast<std::size_t>(j)] = ref / headroom(j);
  r.c[static_cast<std::size_t>(ref_index)] = 1.0;
  return r;
}

InequalityPair feedback_to_pair(const Vec& p, int observed_mcs, const GammaRatios& ratios,
                                int flop) {
  const int k = ratios.ref_index;
  if (observed_mcs > k) {
    throw Error(ErrorCode::ObservedAboveReference,
                "flop " + std::to_string(flop) + ": observed MCS level " +
                    std::to_string(observed_mcs) + " above reference " + std::to_string(k));
  }
  InequalityPair pair;
  pair.flop = flop;
  if (observed_mcs == k) {
    pair.lower = p;
  } else if (observed_mcs == kOutage) {
    // Outage only certifies g'p > I_th_1.
    pair.upper = ratios.at(1) * p;
  } else {
    pair.upper = ratios.at(observed_mcs + 1) * p;
    pair.lower = ratios.at(observed_mcs) * p;
  }
  return pair;
}

InequalityPair binary_to_pair(const Vec& p, bool degraded, int flop) {
  InequalityPair pair;
  pair.flop = flop;
  if (degraded) {
    pair.upper = p;
  } else {
    pair.lower = p;
  }
  return pair;
}

void ConstraintSet::add(InequalityPair pair) {
  if (!pairs.empty() && pair.flop <= pairs.back().flop) {
    throw std::invalid_argument("constraint pairs must have increasing flop indices");
  }
  pairs.push_back(std::move(pair));
}

void ConstraintSet::drop_newest() {
  if (!pairs.empty()) pairs.pop_back();
}

ConstraintSet window_filter(const ConstraintSet& set, int t, int t_w) {
  if (t_w < 1) throw std::invalid_argument("window length must be >= 1");
  ConstraintSet out;
  out.prior_g_ub = set.prior_g_ub;
  for (const auto& pair : set.pairs) {
    if (pair.flop >= t - t_w && pair.flop <= t) out.pairs.push_back(pair);
  }
  return out;
}

int count_violations(const ConstraintSet& set, const Vec& g, double rel_tol) {
  int violations = 0;
  for (const auto& pair : set.pairs) {
    if (pair.upper && !(g.dot(*pair.upper) > 1.0 - rel_tol)) ++violations;
    if (pair.lower && !(g.dot(*pair.lower) <= 1.0 + rel_tol)) ++violations;
  }
  return violations;
}

}  // namespace crlearn
