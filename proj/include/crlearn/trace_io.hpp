#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "crlearn/engine.hpp"

namespace crlearn {

inline constexpr const char* kTraceHeader = "flop,error,i_pu_dbm,capacity,epsilon,mcs,explored";

struct TraceRow {
  int flop = 0;
  double error = 0.0;
  double i_pu_dbm = 0.0;
  double capacity = 0.0;
  double epsilon = 0.0;
  int mcs = 0;
  bool explored = false;

  bool operator==(const TraceRow&) const = default;
};

std::vector<TraceRow> to_rows(const RunTrace& trace);

void write_trace(std::ostream& out, const std::vector<TraceRow>& rows);
void write_trace_file(const std::filesystem::path& path, const RunTrace& trace);

/// Throws Error(Io) on malformed input.
std::vector<TraceRow> read_trace(std::istream& in);

/// Two-column mean-error file: flop,mean_error.
void write_mean_error_file(const std::filesystem::path& path, const std::vector<double>& mean_error);

}  // namespace crlearn
