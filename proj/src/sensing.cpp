#include "crlearn/sensing.hpp"

#include <algorithm>
#include <map>

#include "crlearn/acm.hpp"
#include "crlearn/error.hpp"

namespace crlearn {

int su_classify(int true_mcs, const SensingModel& model, int levels, Rng& rng) {
  if (true_mcs == kOutage || model.p_correct >= 1.0) return true_mcs;
  if (uniform01(rng) < model.p_correct) return true_mcs;
  if (true_mcs == 1) return 2;
  if (true_mcs == levels) return levels - 1;
  return uniform01(rng) < 0.5 ? true_mcs - 1 : true_mcs + 1;
}

int fuse_plurality(std::span<const int> votes) {
  if (votes.empty()) throw Error(ErrorCode::EmptyVoteSet, "no MCS votes to fuse");
  std::map<int, int> tally;
  for (int v : votes) ++tally[v];
  // Ascending keys: the first maximum is the most robust of the tied levels.
  int best = tally.begin()->first;
  int best_count = 0;
  for (const auto& [level, count] : tally) {
    if (count > best_count) {
      best = level;
      best_count = count;
    }
  }
  return best;
}

}  // namespace crlearn
