#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "crlearn/acm.hpp"
#include "crlearn/rng.hpp"

namespace crlearn {

using Vec = Eigen::VectorXd;

enum class LearnerKind { Accpm, Cgcpm };
enum class FeedbackKind { Binary, Mcc };

// How the learner converts an observed MCS into normalized cuts.
//   HighSnr: c_j = gamma_j / gamma_ref (noise neglected).
//   Exact:   c_j = I_th_ref / I_th_j, using the nominal clear-channel SINR.
enum class RatioModel { HighSnr, Exact };

const char* to_string(LearnerKind k) noexcept;
const char* to_string(FeedbackKind k) noexcept;
const char* to_string(RatioModel k) noexcept;

struct FadingConfig {
  int t_c = 250;       // flops per coherence block
  int n_blocks = 3;
};

struct ScenarioConfig {
  int n_su = 5;
  std::uint64_t seed = 1;
  double su_range_m = 3000.0;
  double su_min_dist_m = 50.0;
  double p_max_dbm = 23.0;
  double pu_noise_dbm = -103.0;
  double pu_clear_sinr_db = 20.0;
  AcmProtocol protocol = AcmProtocol::default_ladder();
  double d_th = 0.05;
  double prior_g_ub = 0.08;          // per mW, in units of I_th_ref
  double min_full_power_load = 5.0;  // admissible topologies: g~' p_max >= this
  int hr_samples = 0;                // 0: max(2000, 500 N)
  int hr_burn_in = 0;                // 0: 100 N
  double newton_tol = 1e-10;
  int newton_max_iter = 200;
  std::optional<FadingConfig> fading;
  double su_link_dist_lo_m = 100.0;
  double su_link_dist_hi_m = 500.0;
  double su_noise_dbm = -103.0;
  double sensing_p_correct = 1.0;
  RatioModel ratio_model = RatioModel::Exact;
  LearnerKind learner = LearnerKind::Cgcpm;
  FeedbackKind feedback = FeedbackKind::Mcc;
  int flops = 200;
  int n_topologies = 100;

  /// Throws Error(InvalidConfig) naming the offending key.
  void validate() const;

  int effective_hr_samples() const;
  int effective_hr_burn_in() const;
  double p_max_mw() const;
  /// Window length floor(t_c / N); requires fading.
  int window_length() const;
};

struct Topology {
  std::vector<double> su_pu_dist_m;
  Vec g;  // SU -> PU interference power gains
  std::vector<double> su_link_dist_m;
  Vec h;  // SU link power gains
  double received_pu_power_dbm = 0.0;
  double pu_noise_dbm = 0.0;
};

/// Path-loss law shared by every link: d^-4.
double path_gain(double distance_m);

/// SU positions uniform in the annulus [su_min_dist_m, su_range_m] around the
/// PU receiver, link distances uniform in the configured range.
Topology generate_topology(const ScenarioConfig& cfg, Rng& rng);

/// Redraws the SU positions (and so g); h and the PU budget are kept.
Topology evolve_block_fading(const Topology& topo, const ScenarioConfig& cfg, Rng& rng);

/// Interference threshold (mW) of the MCS the PU uses with the CRN silent.
double reference_threshold_mw(const ScenarioConfig& cfg);

/// g / I_th_ref, per mW.
Vec normalized_gains(const Topology& topo, const ScenarioConfig& cfg);

/// True when the normalized gains sit inside the prior box and the CRN at
/// full power loads the PU beyond min_full_power_load.
bool is_admissible(const Topology& topo, const ScenarioConfig& cfg);

/// Rejection-samples generate_topology until admissible.
Topology draw_admissible_topology(const ScenarioConfig& cfg, Rng& rng);

/// Rejection-samples evolve_block_fading until admissible.
Topology evolve_admissible(const Topology& topo, const ScenarioConfig& cfg, Rng& rng);

}  // namespace crlearn
