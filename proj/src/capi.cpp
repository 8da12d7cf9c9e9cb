#include "crlearn/crlearn.h"

#include <cmath>
#include <algorithm>
#include <cstring>
#include <exception>
#include <limits>
#include <new>
#include <string>

#include "crlearn/config_io.hpp"
#include "crlearn/constraints.hpp"
#include "crlearn/engine.hpp"
#include "crlearn/error.hpp"
#include "crlearn/pu_link.hpp"
#include "crlearn/trace_io.hpp"
#include "crlearn/units.hpp"

struct crl_config {
  crlearn::ScenarioConfig cfg;
};
struct crl_trace {
  crlearn::RunTrace trace;
};
struct crl_ensemble {
  crlearn::EnsembleResult result;
};

namespace {

thread_local std::string g_last_error;

crl_status status_for(crlearn::ErrorCode code) {
  using crlearn::ErrorCode;
  switch (code) {
    case ErrorCode::InvalidConfig:
    case ErrorCode::EmptyVoteSet:
    case ErrorCode::ObservedAboveReference:
      return CRL_ERR_INVALID_CONFIG;
    case ErrorCode::UnknownKey:
      return CRL_ERR_UNKNOWN_KEY;
    case ErrorCode::NonPositiveThreshold:
      return CRL_ERR_NON_POSITIVE_THRESHOLD;
    case ErrorCode::TruthOutsidePrior:
      return CRL_ERR_TRUTH_OUTSIDE_PRIOR;
    case ErrorCode::EmptyPolyhedron:
    case ErrorCode::DegeneratePolyhedron:
    case ErrorCode::UnboundedLp:
    case ErrorCode::ChordCollapse:
    case ErrorCode::EmptySlice:
    case ErrorCode::ZeroEstimate:
      return CRL_ERR_GEOMETRY;
    case ErrorCode::Io:
      return CRL_ERR_IO;
  }
  return CRL_ERR_INTERNAL;
}

// Runs fn and converts any exception into a status plus a stored message.
template <typename Fn>
crl_status guarded(Fn&& fn) {
  try {
    fn();
    g_last_error.clear();
    return CRL_OK;
  } catch (const crlearn::Error& e) {
    g_last_error = e.what();
    return status_for(e.code());
  } catch (const std::bad_alloc&) {
    g_last_error = "out of memory";
  } catch (const std::exception& e) {
    g_last_error = e.what();
  } catch (...) {
    g_last_error = "unknown failure";
  }
  return CRL_ERR_INTERNAL;
}

crl_status invalid_argument(const char* what) {
  g_last_error = what;
  return CRL_ERR_INVALID_ARGUMENT;
}

crlearn::LearnerKind to_learner(crl_learner l) {
  return l == CRL_LEARNER_ACCPM ? crlearn::LearnerKind::Accpm : crlearn::LearnerKind::Cgcpm;
}

crlearn::FeedbackKind to_feedback(crl_feedback f) {
  return f == CRL_FEEDBACK_BINARY ? crlearn::FeedbackKind::Binary : crlearn::FeedbackKind::Mcc;
}

}  // namespace

extern "C" {

const char* crl_version(void) { return "1.0.0"; }

const char* crl_last_error(void) { return g_last_error.c_str(); }

const char* crl_status_name(crl_status status) {
  switch (status) {
    case CRL_OK: return "ok";
    case CRL_ERR_INVALID_CONFIG: return "invalid_config";
    case CRL_ERR_UNKNOWN_KEY: return "unknown_key";
    case CRL_ERR_NON_POSITIVE_THRESHOLD: return "non_positive_threshold";
    case CRL_ERR_TRUTH_OUTSIDE_PRIOR: return "truth_outside_prior";
    case CRL_ERR_GEOMETRY: return "geometry";
    case CRL_ERR_IO: return "io";
    case CRL_ERR_INVALID_ARGUMENT: return "invalid_argument";
    case CRL_ERR_INTERNAL: return "internal";
  }
  return "unknown_status";
}

crl_status crl_config_create(crl_config** out) {
  if (!out) return invalid_argument("out is null");
  return guarded([&] { *out = new crl_config{}; });
}

crl_status crl_config_load(const char* path, crl_config** out) {
  if (!path || !out) return invalid_argument("path or out is null");
  return guarded([&] { *out = new crl_config{crlearn::load_config_file(path)}; });
}

crl_status crl_config_clone(const crl_config* cfg, crl_config** out) {
  if (!cfg || !out) return invalid_argument("cfg or out is null");
  return guarded([&] { *out = new crl_config{cfg->cfg}; });
}

crl_status crl_config_set(crl_config* cfg, const char* key, const char* value) {
  if (!cfg || !key || !value) return invalid_argument("cfg, key or value is null");
  return guarded([&] {
    crlearn::ScenarioConfig copy = cfg->cfg;
    crlearn::apply_setting(copy, key, value);
    cfg->cfg = std::move(copy);
  });
}

crl_status crl_config_validate(const crl_config* cfg) {
  if (!cfg) return invalid_argument("cfg is null");
  return guarded([&] { cfg->cfg.validate(); });
}

void crl_config_destroy(crl_config* cfg) { delete cfg; }

crl_status crl_thresholds(const crl_config* cfg, crl_threshold_row* rows, size_t capacity,
                          size_t* count) {
  if (!cfg || !count) return invalid_argument("cfg or count is null");
  const auto& c = cfg->cfg;
  const auto levels = static_cast<size_t>(c.protocol.levels());
  *count = levels;
  if (capacity < levels || !rows) return invalid_argument("row buffer too small");
  return guarded([&] {
    const double rx_dbm = c.pu_noise_dbm + c.pu_clear_sinr_db;
    const auto i_th = crlearn::interference_thresholds(c.protocol, rx_dbm, c.pu_noise_dbm);
    const int ref = crlearn::select_mcs(c.pu_clear_sinr_db, c.protocol);
    if (ref == crlearn::kOutage) {
      throw crlearn::Error(crlearn::ErrorCode::InvalidConfig,
                           "pu_clear_sinr_db: clear channel is already in outage");
    }
    const auto exact = crlearn::threshold_ratios(c.protocol, ref, c.pu_clear_sinr_db);
    for (int j = 1; j <= c.protocol.levels(); ++j) {
      crl_threshold_row& r = rows[j - 1];
      r = crl_threshold_row{};
      r.level = j;
      std::strncpy(r.label, c.protocol.label(j).c_str(), sizeof r.label - 1);
      r.gamma_db = c.protocol.gamma_db(j);
      r.i_th_dbm = i_th[static_cast<size_t>(j - 1)];
      r.gamma_ratio = crlearn::db_to_linear(c.protocol.gamma_db(j) - c.protocol.gamma_db(ref));
      r.threshold_ratio = j <= ref ? exact.at(j) : std::numeric_limits<double>::quiet_NaN();
    }
  });
}

crl_status crl_run(const crl_config* cfg, crl_trace** out) {
  if (!cfg || !out) return invalid_argument("cfg or out is null");
  return guarded([&] { *out = new crl_trace{crlearn::run_configured(cfg->cfg)}; });
}

size_t crl_trace_length(const crl_trace* trace) { return trace ? trace->trace.records.size() : 0; }

crl_status crl_trace_row_at(const crl_trace* trace, size_t index, crl_trace_row* out) {
  if (!trace || !out) return invalid_argument("trace or out is null");
  if (index >= trace->trace.records.size()) return invalid_argument("index out of range");
  const auto& r = trace->trace.records[index];
  *out = crl_trace_row{r.flop,     r.rel_error, r.i_pu_dbm, r.capacity,
                       r.epsilon,  r.mcs,       r.explored ? 1 : 0};
  return CRL_OK;
}

crl_status crl_trace_get_summary(const crl_trace* trace, crl_run_summary* out) {
  if (!trace || !out) return invalid_argument("trace or out is null");
  const auto& s = trace->trace.summary;
  *out = crl_run_summary{s.flops_to_1pct.value_or(-1), s.mean_i_pu_dbm,       s.mean_capacity,
                         s.reference_mcs,              s.dropped_observations, s.geometry_recoveries,
                         s.newton_nonconverged};
  return CRL_OK;
}

crl_status crl_trace_write_csv(const crl_trace* trace, const char* path) {
  if (!trace || !path) return invalid_argument("trace or path is null");
  return guarded([&] { crlearn::write_trace_file(path, trace->trace); });
}

void crl_trace_destroy(crl_trace* trace) { delete trace; }

crl_status crl_ensemble_run(const crl_config* cfg, crl_learner learner, crl_feedback feedback,
                            int32_t n_topologies, int32_t flops, int32_t threads,
                            crl_ensemble** out) {
  if (!cfg || !out) return invalid_argument("cfg or out is null");
  return guarded([&] {
    const auto& c = cfg->cfg;
    const int n = n_topologies > 0 ? n_topologies : c.n_topologies;
    int budget = flops;
    if (budget <= 0) budget = c.fading ? c.fading->t_c * c.fading->n_blocks : c.flops;
    *out = new crl_ensemble{crlearn::run_ensemble(c, to_learner(learner), to_feedback(feedback),
                                                  n, budget, threads)};
  });
}

size_t crl_ensemble_length(const crl_ensemble* ens) {
  return ens ? ens->result.mean_error.size() : 0;
}

crl_status crl_ensemble_mean_error(const crl_ensemble* ens, double* out, size_t capacity) {
  if (!ens || !out) return invalid_argument("ens or out is null");
  const auto& e = ens->result.mean_error;
  if (capacity < e.size()) return invalid_argument("buffer too small");
  std::copy(e.begin(), e.end(), out);
  return CRL_OK;
}

crl_status crl_ensemble_get_summary(const crl_ensemble* ens, crl_ensemble_summary* out) {
  if (!ens || !out) return invalid_argument("ens or out is null");
  const auto& r = ens->result;
  *out = crl_ensemble_summary{static_cast<int32_t>(r.runs.size()), r.n_converged, r.flops,
                              r.mean_flops_to_1pct, r.mean_i_pu_dbm, r.mean_capacity};
  return CRL_OK;
}

crl_status crl_ensemble_write_csv(const crl_ensemble* ens, const char* path) {
  if (!ens || !path) return invalid_argument("ens or path is null");
  return guarded([&] { crlearn::write_mean_error_file(path, ens->result.mean_error); });
}

void crl_ensemble_destroy(crl_ensemble* ens) { delete ens; }

}  // extern "C"
