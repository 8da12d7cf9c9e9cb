#include "crlearn/pu_link.hpp"

#include <string>

#include "crlearn/error.hpp"
#include "crlearn/units.hpp"

namespace crlearn {

double aggregate_interference_mw(const Topology& topo, const Vec& p_mw) {
  return topo.g.dot(p_mw);
}

double pu_sinr(const Topology& topo, const Vec& p_mw) {
  const double signal = dbm_to_mw(topo.received_pu_power_dbm);
  const double noise = dbm_to_mw(topo.pu_noise_dbm);
  return linear_to_db(signal / (aggregate_interference_mw(topo, p_mw) + noise));
}

int select_mcs(double sinr_db, const AcmProtocol& protocol) {
  int level = kOutage;
  for (int j = 1; j <= protocol.levels(); ++j) {
    if (protocol.gamma_db(j) <= sinr_db) level = j;
  }
  return level;
}

std::vector<double> interference_thresholds(const AcmProtocol& protocol,
                                            double received_power_dbm, double noise_dbm) {
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(protocol.levels()));
  const double noise = dbm_to_mw(noise_dbm);
  for (int j = 1; j <= protocol.levels(); ++j) {
    const double allowed = dbm_to_mw(received_power_dbm - protocol.gamma_db(j)) - noise;
    if (!(allowed > 0.0)) {
      throw Error(ErrorCode::NonPositiveThreshold,
                  "mcs '" + protocol.label(j) + "': noise alone exceeds the required I+N");
    }
    out.push_back(mw_to_dbm(allowed));
  }
  return out;
}

int probe(PuState& state, const Topology& topo, const Vec& p_mw, const AcmProtocol& protocol) {
  state.received_power_dbm = topo.received_pu_power_dbm;
  state.noise_dbm = topo.pu_noise_dbm;
  state.current_mcs = select_mcs(pu_sinr(topo, p_mw), protocol);
  return state.current_mcs;
}

}  // namespace crlearn
