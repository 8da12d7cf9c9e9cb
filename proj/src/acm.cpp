#include "crlearn/acm.hpp"

#include <string>

#include "crlearn/error.hpp"

namespace crlearn {

const char* to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::InvalidConfig: return "InvalidConfig";
    case ErrorCode::UnknownKey: return "UnknownKey";
    case ErrorCode::NonPositiveThreshold: return "NonPositiveThreshold";
    case ErrorCode::EmptyVoteSet: return "EmptyVoteSet";
    case ErrorCode::ObservedAboveReference: return "ObservedAboveReference";
    case ErrorCode::EmptyPolyhedron: return "EmptyPolyhedron";
    case ErrorCode::DegeneratePolyhedron: return "DegeneratePolyhedron";
    case ErrorCode::UnboundedLp: return "UnboundedLp";
    case ErrorCode::ChordCollapse: return "ChordCollapse";
    case ErrorCode::EmptySlice: return "EmptySlice";
    case ErrorCode::ZeroEstimate: return "ZeroEstimate";
    case ErrorCode::TruthOutsidePrior: return "TruthOutsidePrior";
    case ErrorCode::Io: return "Io";
  }
  return "Unknown";
}

AcmProtocol::AcmProtocol(std::vector<McsEntry> entries) : entries_(std::move(entries)) {
  if (entries_.size() < 2) {
    throw Error(ErrorCode::InvalidConfig, "mcs: protocol needs at least two levels");
  }
  for (std::size_t j = 1; j < entries_.size(); ++j) {
    if (!(entries_[j].gamma_db > entries_[j - 1].gamma_db)) {
      throw Error(ErrorCode::InvalidConfig,
                  "mcs: gamma must be strictly ascending (level " + std::to_string(j + 1) +
                      ", '" + entries_[j].label + "')");
    }
  }
}

AcmProtocol AcmProtocol::default_ladder() {
  return AcmProtocol({{"BPSK 1/2", 5.0},
                      {"BPSK 3/4", 6.0},
                      {"QPSK 1/2", 7.0},
                      {"QPSK 3/4", 9.0},
                      {"16QAM 1/2", 13.0}});
}

const McsEntry& AcmProtocol::entry(int level) const {
  if (level < 1 || level > levels()) {
    throw std::out_of_range("MCS level " + std::to_string(level) + " outside 1.." +
                            std::to_string(levels()));
  }
  return entries_[static_cast<std::size_t>(level - 1)];
}

std::string AcmProtocol::label(int level) const {
  if (level == kOutage) return "Outage";
  return entry(level).label;
}

}  // namespace crlearn
