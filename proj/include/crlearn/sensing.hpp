#pragma once

#include <span>

#include "crlearn/rng.hpp"

namespace crlearn {

struct SensingModel {
  double p_correct = 1.0;
};

/// One SU's MCS estimate. Errors land on an adjacent level (clamped to
/// 1..levels); outage is always sensed correctly.
int su_classify(int true_mcs, const SensingModel& model, int levels, Rng& rng);

/// Most frequent vote; ties resolve to the lower (more robust) level.
/// Throws Error(EmptyVoteSet).
int fuse_plurality(std::span<const int> votes);

}  // namespace crlearn
