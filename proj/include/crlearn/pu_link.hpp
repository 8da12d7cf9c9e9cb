#pragma once

#include <vector>

#include "crlearn/acm.hpp"
#include "crlearn/scenario.hpp"

namespace crlearn {

struct PuState {
  double received_power_dbm = 0.0;
  double noise_dbm = 0.0;
  int current_mcs = kOutage;
};

/// Aggregate interference g'p in mW; p in mW.
double aggregate_interference_mw(const Topology& topo, const Vec& p_mw);

/// PU SINR in dB for SU powers p (mW).
double pu_sinr(const Topology& topo, const Vec& p_mw);

/// Highest level whose gamma does not exceed the SINR; kOutage below gamma_1.
int select_mcs(double sinr_db, const AcmProtocol& protocol);

/// Per-level maximum tolerable interference (dBm), index 0 is level 1.
/// Throws Error(NonPositiveThreshold) when the noise alone breaks a level.
std::vector<double> interference_thresholds(const AcmProtocol& protocol,
                                            double received_power_dbm,
                                            double noise_dbm);

/// Probes the link and updates the state's current MCS.
int probe(PuState& state, const Topology& topo, const Vec& p_mw, const AcmProtocol& protocol);

}  // namespace crlearn
