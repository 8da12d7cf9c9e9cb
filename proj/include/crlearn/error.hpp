#pragma once

#include <stdexcept>
#include <string>

namespace crlearn {

enum class ErrorCode {
  InvalidConfig,
  UnknownKey,
  NonPositiveThreshold,
  EmptyVoteSet,
  ObservedAboveReference,
  EmptyPolyhedron,
  DegeneratePolyhedron,
  UnboundedLp,
  ChordCollapse,
  EmptySlice,
  ZeroEstimate,
  TruthOutsidePrior,
  Io,
};

const char* to_string(ErrorCode code) noexcept;

// All recoverable failures of the library surface as this exception; the C API
// maps the code onto a status value.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace crlearn
