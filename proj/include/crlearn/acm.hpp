#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace crlearn {

// MCS levels are 1-based in ascending gamma order; level 0 is PU outage.
inline constexpr int kOutage = 0;

struct McsEntry {
  std::string label;
  double gamma_db;
};

/// Ordered link-adaptation ladder of the primary link.
class AcmProtocol {
 public:
  /// Throws Error(InvalidConfig) unless there are at least two entries with
  /// strictly ascending gamma.
  explicit AcmProtocol(std::vector<McsEntry> entries);

  /// BPSK 1/2 .. 16QAM 1/2 at 5/6/7/9/13 dB.
  static AcmProtocol default_ladder();

  int levels() const noexcept { return static_cast<int>(entries_.size()); }
  const McsEntry& entry(int level) const;
  double gamma_db(int level) const { return entry(level).gamma_db; }
  std::string label(int level) const;
  const std::vector<McsEntry>& entries() const noexcept { return entries_; }

 private:
  std::vector<McsEntry> entries_;
};

}  // namespace crlearn
