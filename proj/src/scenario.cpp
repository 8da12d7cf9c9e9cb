#include "crlearn/scenario.hpp"

#include <cmath>
#include <string>

#include "crlearn/error.hpp"
#include "crlearn/pu_link.hpp"
#include "crlearn/units.hpp"

namespace crlearn {

namespace {

void require(bool ok, const char* key, const std::string& why) {
  if (!ok) throw Error(ErrorCode::InvalidConfig, std::string(key) + ": " + why);
}

constexpr int kMaxAdmissibleDraws = 100000;

double draw_annulus_radius(double r_min, double r_max, Rng& rng) {
  // Area-uniform radius in the annulus.
  const double u = uniform01(rng);
  return std::sqrt(r_min * r_min + u * (r_max * r_max - r_min * r_min));
}

}  // namespace

const char* to_string(LearnerKind k) noexcept {
  return k == LearnerKind::Accpm ? "accpm" : "cgcpm";
}

const char* to_string(FeedbackKind k) noexcept {
  return k == FeedbackKind::Binary ? "binary" : "mcc";
}

const char* to_string(RatioModel k) noexcept {
  return k == RatioModel::HighSnr ? "high_snr" : "exact";
}

void ScenarioConfig::validate() const {
  require(n_su >= 1, "n_su", "must be >= 1");
  require(std::isfinite(p_max_dbm), "p_max_dbm", "must be finite");
  require(std::isfinite(pu_noise_dbm), "pu_noise_dbm", "must be finite");
  require(std::isfinite(pu_clear_sinr_db), "pu_clear_sinr_db", "must be finite");
  require(su_min_dist_m > 0.0, "su_min_dist_m", "must be > 0");
  require(su_range_m > su_min_dist_m, "su_range_m", "must exceed su_min_dist_m");
  require(prior_g_ub > 0.0 && std::isfinite(prior_g_ub), "prior_g_ub", "must be > 0");
  require(d_th > 0.0, "d_th", "must be > 0");
  require(min_full_power_load >= 0.0, "min_full_power_load", "must be >= 0");
  require(hr_samples >= 0, "hr_samples", "must be >= 0");
  require(hr_burn_in >= 0, "hr_burn_in", "must be >= 0");
  require(newton_tol > 0.0, "newton_tol", "must be > 0");
  require(newton_max_iter >= 1, "newton_max_iter", "must be >= 1");
  require(su_link_dist_lo_m > 0.0 && su_link_dist_hi_m >= su_link_dist_lo_m, "su_link_dist_m",
          "need 0 < lo <= hi");
  require(std::isfinite(su_noise_dbm), "su_noise_dbm", "must be finite");
  require(sensing_p_correct > 0.0 && sensing_p_correct <= 1.0, "sensing.p_correct",
          "must lie in (0, 1]");
  require(flops >= 1, "flops", "must be >= 1");
  require(n_topologies >= 1, "n_topologies", "must be >= 1");
  if (fading) {
    require(fading->t_c >= n_su, "fading.t_c", "must be >= n_su so the window is non-empty");
    require(fading->n_blocks >= 1, "fading.n_blocks", "must be >= 1");
  }
  require(select_mcs(pu_clear_sinr_db, protocol) != kOutage, "pu_clear_sinr_db",
          "PU is in outage without any CRN interference");
  // Surfaces NonPositiveThreshold for inconsistent PU budgets.
  (void)interference_thresholds(protocol, pu_noise_dbm + pu_clear_sinr_db, pu_noise_dbm);
}

int ScenarioConfig::effective_hr_samples() const {
  return hr_samples > 0 ? hr_samples : std::max(2000, 500 * n_su);
}

int ScenarioConfig::effective_hr_burn_in() const {
  return hr_burn_in > 0 ? hr_burn_in : 100 * n_su;
}

double ScenarioConfig::p_max_mw() const { return dbm_to_mw(p_max_dbm); }

int ScenarioConfig::window_length() const {
  if (!fading) throw Error(ErrorCode::InvalidConfig, "fading: window requested for a static run");
  return fading->t_c / n_su;
}

double path_gain(double distance_m) {
  const double d2 = distance_m * distance_m;
  return 1.0 / (d2 * d2);
}

Topology generate_topology(const ScenarioConfig& cfg, Rng& rng) {
  const auto n = static_cast<std::size_t>(cfg.n_su);
  Topology topo;
  topo.su_pu_dist_m.resize(n);
  topo.su_link_dist_m.resize(n);
  topo.g.resize(cfg.n_su);
  topo.h.resize(cfg.n_su);
  for (std::size_t i = 0; i < n; ++i) {
    topo.su_pu_dist_m[i] = draw_annulus_radius(cfg.su_min_dist_m, cfg.su_range_m, rng);
    topo.g(static_cast<Eigen::Index>(i)) = path_gain(topo.su_pu_dist_m[i]);
  }
  for (std::size_t i = 0; i < n; ++i) {
    const double u = uniform01(rng);
    topo.su_link_dist_m[i] =
        cfg.su_link_dist_lo_m + u * (cfg.su_link_dist_hi_m - cfg.su_link_dist_lo_m);
    topo.h(static_cast<Eigen::Index>(i)) = path_gain(topo.su_link_dist_m[i]);
  }
  topo.pu_noise_dbm = cfg.pu_noise_dbm;
  topo.received_pu_power_dbm = cfg.pu_noise_dbm + cfg.pu_clear_sinr_db;
  return topo;
}

Topology evolve_block_fading(const Topology& topo, const ScenarioConfig& cfg, Rng& rng) {
  Topology next = topo;
  for (std::size_t i = 0; i < next.su_pu_dist_m.size(); ++i) {
    next.su_pu_dist_m[i] = draw_annulus_radius(cfg.su_min_dist_m, cfg.su_range_m, rng);
    next.g(static_cast<Eigen::Index>(i)) = path_gain(next.su_pu_dist_m[i]);
  }
  return next;
}

double reference_threshold_mw(const ScenarioConfig& cfg) {
  const int k = select_mcs(cfg.pu_clear_sinr_db, cfg.protocol);
  if (k == kOutage) {
    throw Error(ErrorCode::InvalidConfig, "pu_clear_sinr_db: PU in outage with the CRN silent");
  }
  const double rx = dbm_to_mw(cfg.pu_noise_dbm + cfg.pu_clear_sinr_db);
  const double th = rx / db_to_linear(cfg.protocol.gamma_db(k)) - dbm_to_mw(cfg.pu_noise_dbm);
  if (!(th > 0.0)) {
    throw Error(ErrorCode::NonPositiveThreshold, "reference interference threshold is not positive");
  }
  return th;
}

Vec normalized_gains(const Topology& topo, const ScenarioConfig& cfg) {
  return topo.g / reference_threshold_mw(cfg);
}

bool is_admissible(const Topology& topo, const ScenarioConfig& cfg) {
  const Vec q = normalized_gains(topo, cfg);
  if (q.maxCoeff() > cfg.prior_g_ub) return false;
  return q.sum() * cfg.p_max_mw() >= cfg.min_full_power_load;
}

Topology draw_admissible_topology(const ScenarioConfig& cfg, Rng& rng) {
  for (int attempt = 0; attempt < kMaxAdmissibleDraws; ++attempt) {
    Topology topo = generate_topology(cfg, rng);
    if (is_admissible(topo, cfg)) return topo;
  }
  throw Error(ErrorCode::InvalidConfig,
              "prior_g_ub/min_full_power_load: no admissible topology found in " +
                  std::to_string(kMaxAdmissibleDraws) + " draws");
}

Topology evolve_admissible(const Topology& topo, const ScenarioConfig& cfg, Rng& rng) {
  for (int attempt = 0; attempt < kMaxAdmissibleDraws; ++attempt) {
    Topology next = evolve_block_fading(topo, cfg, rng);
    if (is_admissible(next, cfg)) return next;
  }
  throw Error(ErrorCode::InvalidConfig,
              "prior_g_ub/min_full_power_load: no admissible channel redraw found");
}

}  // namespace crlearn
