#include "crlearn/engine.hpp"

#include <atomic>
#include <cmath>
#include <exception>
#include <thread>
#include <vector>

#include "crlearn/constraints.hpp"
#include "crlearn/control.hpp"
#include "crlearn/error.hpp"
#include "crlearn/polytope.hpp"
#include "crlearn/pu_link.hpp"
#include "crlearn/sensing.hpp"
#include "crlearn/units.hpp"

namespace crlearn {

namespace {

constexpr double kViolationTolerance = 1e-9;
// Smallest relative width a cut may leave along its own normal. Repeated
// exploit probes bisect one direction geometrically; without this floor the
// set turns numerically flat there and every later cut is rejected.
constexpr double kMinSliver = 1e-7;

// Owns the constraint set and the current center. Works in reference-power
// units: powers are fractions of p_max, gains are g / I_th_ref * p_max.
class Localizer {
 public:
  Localizer(const ScenarioConfig& cfg, LearnerKind learner, int dim, double prior_ub,
            std::optional<int> window)
      : learner_(learner), dim_(dim), window_(window),
        sampler_{cfg.effective_hr_samples(), cfg.effective_hr_burn_in()},
        newton_{cfg.newton_tol, cfg.newton_max_iter, 0.25, 0.5},
        P_(Polyhedron::from_constraints(ConstraintSet{{}, prior_ub}, dim)) {
    set_.prior_g_ub = prior_ub;
    estimate_ = Vec::Constant(dim, prior_ub / 2.0);
    box_ = BoundingBox{Vec::Zero(dim), Vec::Constant(dim, prior_ub)};
  }

  // Returns whether the new pair survived.
  bool update(std::optional<InequalityPair> pair, int t, Rng& rng) {
    if (window_) set_ = window_filter(set_, t, *window_);
    const bool added = pair.has_value();
    if (pair) {
      relax(*pair);
      set_.add(std::move(*pair));
    }
    bool stored = added;
    if (!rebuild()) {
      ++recoveries_;
      if (added) {
        set_.drop_newest();
        stored = false;
      }
      if (!rebuild()) {
        set_.pairs.clear();
        rebuild();
      }
    }
    recenter(rng);
    return stored;
  }

  const Vec& estimate() const { return estimate_; }
  const BoundingBox& box() const { return box_; }
  const ConstraintSet& constraints() const { return set_; }
  const Polyhedron& polyhedron() const { return P_; }
  int recoveries() const { return recoveries_; }
  int newton_nonconverged() const { return newton_nonconverged_; }
  int relaxed_cuts() const { return relaxed_; }

 private:
  // Weakens a cut that would leave less than kMinSliver of the current set
  // along its normal. Both rewrites only enlarge the kept half-space, so any
  // point satisfying the original cut still satisfies the stored one. On a
  // set too thin for the LP to resolve the cut is kept as observed and
  // rebuild() decides what to do with it.
  void relax(InequalityPair& pair) {
    const auto extreme = [&](const Vec& normal, Sense sense) -> std::optional<double> {
      try {
        return lp_solve(normal, sense, P_).optimum;
      } catch (const Error& e) {
        if (e.code() != ErrorCode::EmptyPolyhedron) throw;
        return std::nullopt;
      }
    };
    if (pair.upper) {
      const auto hi = extreme(*pair.upper, Sense::Maximize);
      if (hi && *hi > 1.0 && *hi - 1.0 < kMinSliver * *hi) {
        *pair.upper /= *hi * (1.0 - kMinSliver);
        ++relaxed_;
      }
    }
    if (pair.lower) {
      const auto lo = extreme(*pair.lower, Sense::Minimize);
      if (lo && *lo < 1.0 && 1.0 - *lo < kMinSliver * *lo) {
        *pair.lower /= *lo * (1.0 + kMinSliver);
        ++relaxed_;
      }
    }
  }

  bool rebuild() {
    Polyhedron P = Polyhedron::from_constraints(set_, dim_);
    try {
      cheb_ = chebyshev_center(P).center;
      box_ = bounding_box(P);
    } catch (const Error& e) {
      if (e.code() == ErrorCode::EmptyPolyhedron || e.code() == ErrorCode::DegeneratePolyhedron) {
        return false;
      }
      throw;
    }
    P_ = std::move(P);
    return true;
  }

  void recenter(Rng& rng) {
    if (learner_ == LearnerKind::Cgcpm) {
      try {
        CgEstimate cg = center_of_gravity_seeded(P_.without_redundant(box_), sampler_, rng, seeds_);
        estimate_ = std::move(cg.center);
        seeds_ = std::move(cg.seeds);
      } catch (const Error& e) {
        if (e.code() != ErrorCode::ChordCollapse && e.code() != ErrorCode::DegeneratePolyhedron) {
          throw;
        }
        ++recoveries_;
        estimate_ = cheb_;
      }
    } else {
      AnalyticCenterResult ac = analytic_center(P_, estimate_, newton_);
      if (!ac.converged) ++newton_nonconverged_;
      estimate_ = std::move(ac.center);
    }
  }

  LearnerKind learner_;
  int dim_;
  std::optional<int> window_;
  SamplerSettings sampler_;
  NewtonSettings newton_;
  ConstraintSet set_;
  Polyhedron P_;
  BoundingBox box_;
  Vec cheb_;
  Vec estimate_;
  std::vector<Vec> seeds_;
  int recoveries_ = 0;
  int newton_nonconverged_ = 0;
  int relaxed_ = 0;
};

struct Block {
  int first_flop = 1;
};

RunTrace run_loop(const ScenarioConfig& cfg, const Topology& initial, LearnerKind learner,
                  FeedbackKind feedback, int flops, Rng& rng, Rng* channel_rng,
                  const RunOptions& options) {
  cfg.validate();
  const int n = cfg.n_su;
  const double p_ref = cfg.p_max_mw();
  const double prior_ub = cfg.prior_g_ub * p_ref;
  const Vec x_max = Vec::Ones(n);
  const Vec su_noise = Vec::Constant(n, dbm_to_mw(cfg.su_noise_dbm));

  Topology topo = initial;
  if (topo.g.size() != n) throw Error(ErrorCode::InvalidConfig, "n_su: topology size mismatch");
  Vec truth = normalized_gains(topo, cfg) * p_ref;
  if (truth.maxCoeff() > prior_ub || truth.minCoeff() < 0.0) {
    throw Error(ErrorCode::TruthOutsidePrior,
                "prior_g_ub: true normalized gains lie outside the prior box");
  }
  Vec h_scaled = topo.h * p_ref;

  const SensingModel sensing{cfg.sensing_p_correct};
  const AcmProtocol& protocol = cfg.protocol;
  std::vector<int> votes(static_cast<std::size_t>(n));
  auto sense = [&](int true_mcs) {
    for (auto& v : votes) v = su_classify(true_mcs, sensing, protocol.levels(), rng);
    return fuse_plurality(votes);
  };

  // Flop 0: silent reference sensing.
  const int reference = sense(select_mcs(pu_sinr(topo, Vec::Zero(n)), protocol));
  if (reference == kOutage) {
    throw Error(ErrorCode::InvalidConfig, "pu_clear_sinr_db: reference sensing reports outage");
  }
  const GammaRatios ratios = cfg.ratio_model == RatioModel::HighSnr
                                 ? gamma_ratios(protocol, reference)
                                 : threshold_ratios(protocol, reference, cfg.pu_clear_sinr_db);

  std::optional<int> window;
  if (channel_rng) window = cfg.window_length();
  Localizer loc(cfg, learner, n, prior_ub, window);
  const EpsilonSchedule schedule{cfg.d_th};
  const int walk_steps = cfg.effective_hr_burn_in();

  RunTrace trace;
  trace.records.reserve(static_cast<std::size_t>(flops));
  RunSummary& sum = trace.summary;
  sum.reference_mcs = reference;
  Block block;
  std::vector<double> errors;
  errors.reserve(static_cast<std::size_t>(flops));
  double i_pu_total = 0.0;
  double capacity_total = 0.0;

  for (int t = 1; t <= flops; ++t) {
    if (channel_rng && t > 1 && (t - 1) % cfg.fading->t_c == 0) {
      topo = evolve_admissible(topo, cfg, *channel_rng);
      truth = normalized_gains(topo, cfg) * p_ref;
      block.first_flop = t;
    }

    const Vec est = loc.estimate();
    const double eps = epsilon(d_max(est, loc.box()), est.norm(), schedule);
    bool explored = false;
    Vec x;
    if (uniform01(rng) < eps) {
      try {
        x = explore_sample(est, x_max, rng, walk_steps);
        explored = true;
      } catch (const Error& e) {
        if (e.code() != ErrorCode::EmptySlice) throw;
      }
    }
    if (!explored) x = exploit_waterfill(est, h_scaled, su_noise, x_max);

    const Vec p_mw = x * p_ref;
    const double i_pu = aggregate_interference_mw(topo, p_mw);
    const int true_mcs = select_mcs(pu_sinr(topo, p_mw), protocol);
    const int fused = sense(true_mcs);

    std::optional<InequalityPair> pair;
    if (feedback == FeedbackKind::Mcc) {
      try {
        pair = feedback_to_pair(x, fused, ratios, t);
      } catch (const Error& e) {
        if (e.code() != ErrorCode::ObservedAboveReference) throw;
        ++sum.dropped_observations;
      }
    } else {
      pair = binary_to_pair(x, fused < reference, t);
    }
    const bool stored = loc.update(std::move(pair), t, rng);

    FlopRecord rec;
    rec.flop = t;
    rec.g_est = loc.estimate() / p_ref;
    rec.rel_error = error_metric(loc.estimate(), truth);
    rec.i_pu_mw = i_pu;
    rec.i_pu_dbm = mw_to_dbm(i_pu);
    rec.capacity = capacity(p_mw, topo.h, su_noise);
    rec.epsilon = eps;
    rec.mcs = fused;
    rec.explored = explored;
    rec.pair_stored = stored;
    errors.push_back(rec.rel_error);
    i_pu_total += i_pu;
    capacity_total += rec.capacity;
    trace.records.push_back(std::move(rec));

    if (options.check_invariants) {
      ConstraintSet current = loc.constraints();
      std::erase_if(current.pairs,
                    [&](const InequalityPair& p) { return p.flop < block.first_flop; });
      sum.consistency_violations += count_violations(current, truth, kViolationTolerance);
      if (!loc.polyhedron().contains(loc.estimate(), 1e-9)) ++sum.containment_failures;
    }
  }

  sum.flops_to_1pct = flops_to_precision(errors);
  sum.mean_i_pu_mw = i_pu_total / flops;
  sum.mean_i_pu_dbm = mw_to_dbm(sum.mean_i_pu_mw);
  sum.mean_capacity = capacity_total / flops;
  sum.geometry_recoveries = loc.recoveries();
  sum.newton_nonconverged = loc.newton_nonconverged();
  sum.relaxed_cuts = loc.relaxed_cuts();
  return trace;
}

}  // namespace

double error_metric(const Vec& g_est, const Vec& g_true) {
  return (g_est - g_true).norm() / g_true.norm();
}

std::optional<int> flops_to_precision(const std::vector<double>& errors, double target,
                                      double hold, int hold_flops) {
  const int n = static_cast<int>(errors.size());
  for (int i = 0; i < n; ++i) {
    if (errors[static_cast<std::size_t>(i)] > target) continue;
    if (i + hold_flops > n) return std::nullopt;
    bool held = true;
    for (int j = i; j < i + hold_flops && held; ++j) {
      held = errors[static_cast<std::size_t>(j)] <= hold;
    }
    if (held) return i + 1;
  }
  return std::nullopt;
}

RunTrace run_static(const ScenarioConfig& cfg, const Topology& topo, LearnerKind learner,
                    FeedbackKind feedback, int flops, Rng& rng, const RunOptions& options) {
  return run_loop(cfg, topo, learner, feedback, flops, rng, nullptr, options);
}

RunTrace run_fading(const ScenarioConfig& cfg, const Topology& topo, LearnerKind learner,
                    FeedbackKind feedback, int flops, Rng& rng, Rng& channel_rng,
                    const RunOptions& options) {
  if (!cfg.fading) throw Error(ErrorCode::InvalidConfig, "fading: not configured");
  return run_loop(cfg, topo, learner, feedback, flops, rng, &channel_rng, options);
}

namespace {

RunTrace run_indexed(const ScenarioConfig& cfg, LearnerKind learner, FeedbackKind feedback,
                     int flops, std::uint64_t index, const RunOptions& options) {
  Rng topo_rng = derive_rng(cfg.seed, index, Stream::Topology);
  Rng learner_rng = derive_rng(cfg.seed, index, Stream::Learner);
  const Topology topo = draw_admissible_topology(cfg, topo_rng);
  if (cfg.fading) {
    Rng channel_rng = derive_rng(cfg.seed, index, Stream::Channel);
    return run_fading(cfg, topo, learner, feedback, flops, learner_rng, channel_rng, options);
  }
  return run_static(cfg, topo, learner, feedback, flops, learner_rng, options);
}

}  // namespace

RunTrace run_configured(const ScenarioConfig& cfg, const RunOptions& options) {
  cfg.validate();
  const int flops = cfg.fading ? cfg.fading->t_c * cfg.fading->n_blocks : cfg.flops;
  return run_indexed(cfg, cfg.learner, cfg.feedback, flops, 0, options);
}

EnsembleResult run_ensemble(const ScenarioConfig& cfg, LearnerKind learner, FeedbackKind feedback,
                            int n_topologies, int flops, int threads) {
  cfg.validate();
  if (n_topologies < 1) throw Error(ErrorCode::InvalidConfig, "n_topologies: must be >= 1");
  if (flops < 1) throw Error(ErrorCode::InvalidConfig, "flops: must be >= 1");

  std::vector<RunTrace> traces(static_cast<std::size_t>(n_topologies));
  std::vector<std::exception_ptr> failures(static_cast<std::size_t>(n_topologies));
  std::atomic<int> next{0};
  auto worker = [&] {
    for (int r = next++; r < n_topologies; r = next++) {
      try {
        traces[static_cast<std::size_t>(r)] =
            run_indexed(cfg, learner, feedback, flops, static_cast<std::uint64_t>(r), {});
      } catch (...) {
        failures[static_cast<std::size_t>(r)] = std::current_exception();
      }
    }
  };
  int n_threads = threads > 0 ? threads : static_cast<int>(std::thread::hardware_concurrency());
  n_threads = std::clamp(n_threads, 1, n_topologies);
  if (n_threads == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (int i = 0; i < n_threads; ++i) pool.emplace_back(worker);
  }
  for (const auto& f : failures) {
    if (f) std::rethrow_exception(f);
  }

  EnsembleResult out;
  out.learner = learner;
  out.feedback = feedback;
  out.n_su = cfg.n_su;
  out.flops = flops;
  out.mean_error.assign(static_cast<std::size_t>(flops), 0.0);
  double flops_sum = 0.0;
  double i_pu_sum = 0.0;
  double capacity_sum = 0.0;
  for (const RunTrace& tr : traces) {
    for (int t = 0; t < flops; ++t) {
      out.mean_error[static_cast<std::size_t>(t)] += tr.records[static_cast<std::size_t>(t)].rel_error;
    }
    if (tr.summary.flops_to_1pct) {
      ++out.n_converged;
      flops_sum += *tr.summary.flops_to_1pct;
    } else {
      flops_sum += flops + 1;
    }
    i_pu_sum += tr.summary.mean_i_pu_mw;
    capacity_sum += tr.summary.mean_capacity;
    out.runs.push_back(tr.summary);
  }
  for (double& e : out.mean_error) e /= n_topologies;
  out.mean_flops_to_1pct = flops_sum / n_topologies;
  out.mean_i_pu_dbm = mw_to_dbm(i_pu_sum / n_topologies);
  out.mean_capacity = capacity_sum / n_topologies;
  return out;
}

}  // namespace crlearn
