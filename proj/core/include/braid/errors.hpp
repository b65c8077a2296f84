#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace braid {

enum class ErrorKind {
  RingMismatch,
  NotInvertible,
  ArityMismatch,
  IndexOutOfRange,
  RankMismatch,
  BadPositions,
  NonCommutingLegs,
  WrongRing,
  CocycleViolation,
  BetaNotInvertible,
  UnknownModule,
  GradeMismatch,
  NotInFrameSpan,
  UnsupportedFrameBraiding,
  FramePairingSingular,
  MetricCheckFailed,
  InverseWitnessInvalid,
  OracleUnsound,
  NotTangent,
  NoBlockSplit,
  AxiomOneUnwitnessed,
  SchemaError,
  UnknownName,
  JacobiViolation,
  MissingSection,
  Unsupported,
};

std::string_view error_name(ErrorKind k);

// Every engine failure is raised as this type; the kind is stable and printable.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& detail)
      : std::runtime_error(std::string(error_name(kind)) + ": " + detail), kind_(kind) {}
  ErrorKind kind() const { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& detail) { throw Error(kind, detail); }

}  // namespace braid
