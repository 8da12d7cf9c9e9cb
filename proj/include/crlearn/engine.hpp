#pragma once

#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "crlearn/rng.hpp"
#include "crlearn/scenario.hpp"

namespace crlearn {

struct FlopRecord {
  int flop = 0;
  Vec g_est;  // per mW, normalized by I_th_ref
  double rel_error = 0.0;
  double i_pu_mw = 0.0;
  double i_pu_dbm = 0.0;
  double capacity = 0.0;
  double epsilon = 0.0;
  int mcs = 0;
  bool explored = false;
  bool pair_stored = false;
};

struct RunSummary {
  std::optional<int> flops_to_1pct;
  double mean_i_pu_mw = 0.0;
  double mean_i_pu_dbm = 0.0;
  double mean_capacity = 0.0;
  int reference_mcs = 0;
  // Diagnostics; the first two are only filled when invariant checks are on.
  int consistency_violations = 0;
  int containment_failures = 0;
  int dropped_observations = 0;
  int geometry_recoveries = 0;
  int newton_nonconverged = 0;
  int relaxed_cuts = 0;  // cuts weakened to keep a minimum sliver of width
};

struct RunTrace {
  std::vector<FlopRecord> records;
  RunSummary summary;
};

struct RunOptions {
  bool check_invariants = false;
};

/// |g_est - g_true| / |g_true|.
double error_metric(const Vec& g_est, const Vec& g_true);

/// First flop (1-based) where the error is <= target and stays <= hold for
/// hold_flops consecutive flops starting there.
std::optional<int> flops_to_precision(const std::vector<double>& errors, double target = 0.01,
                                      double hold = 0.02, int hold_flops = 5);

/// Static-channel loop: probe, sense, cut, re-center, for `flops` flops after
/// the silent reference flop. Throws Error(TruthOutsidePrior).
RunTrace run_static(const ScenarioConfig& cfg, const Topology& topo, LearnerKind learner,
                    FeedbackKind feedback, int flops, Rng& rng, const RunOptions& options = {});

/// Block-fading loop: only the latest floor(t_c/N) pairs define the
/// uncertainty set and the interference gains are redrawn every t_c flops
/// from channel_rng. The learner is never told about block boundaries.
RunTrace run_fading(const ScenarioConfig& cfg, const Topology& topo, LearnerKind learner,
                    FeedbackKind feedback, int flops, Rng& rng, Rng& channel_rng,
                    const RunOptions& options = {});

/// Single run as configured (static or fading, learner and feedback from cfg),
/// using the run-0 streams of cfg.seed.
RunTrace run_configured(const ScenarioConfig& cfg, const RunOptions& options = {});

struct EnsembleResult {
  LearnerKind learner = LearnerKind::Cgcpm;
  FeedbackKind feedback = FeedbackKind::Mcc;
  int n_su = 0;
  int flops = 0;
  std::vector<double> mean_error;  // per flop
  std::vector<RunSummary> runs;
  double mean_flops_to_1pct = 0.0;  // non-converged runs count as flops + 1
  int n_converged = 0;
  double mean_i_pu_dbm = 0.0;  // of the linear mean over runs and flops
  double mean_capacity = 0.0;
};

/// Independent runs over n_topologies topologies (fading when cfg.fading is
/// set). Run r draws its topology, learner and channel randomness from
/// streams derived from (cfg.seed, r), so results do not depend on `threads`
/// and every learner/feedback combination sees the same topologies.
EnsembleResult run_ensemble(const ScenarioConfig& cfg, LearnerKind learner, FeedbackKind feedback,
                            int n_topologies, int flops, int threads = 0);

}  // namespace crlearn
