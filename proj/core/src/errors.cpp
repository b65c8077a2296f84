#include "braid/errors.hpp"

namespace braid {

std::string_view error_name(ErrorKind k) {
  switch (k) {
    case ErrorKind::RingMismatch:
      return "RingMismatch";
    case ErrorKind::NotInvertible:
      return "NotInvertible";
    case ErrorKind::ArityMismatch:
      return "ArityMismatch";
    case ErrorKind::IndexOutOfRange:
      return "IndexOutOfRange";
    case ErrorKind::RankMismatch:
      return "RankMismatch";
    case ErrorKind::BadPositions:
      return "BadPositions";
    case ErrorKind::NonCommutingLegs:
      return "NonCommutingLegs";
    case ErrorKind::WrongRing:
      return "WrongRing";
    case ErrorKind::CocycleViolation:
      return "CocycleViolation";
    case ErrorKind::BetaNotInvertible:
      return "BetaNotInvertible";
    case ErrorKind::UnknownModule:
      return "UnknownModule";
    case ErrorKind::GradeMismatch:
      return "GradeMismatch";
    case ErrorKind::NotInFrameSpan:
      return "NotInFrameSpan";
    case ErrorKind::UnsupportedFrameBraiding:
      return "UnsupportedFrameBraiding";
    case ErrorKind::FramePairingSingular:
      return "FramePairingSingular";
    case ErrorKind::MetricCheckFailed:
      return "MetricCheckFailed";
    case ErrorKind::InverseWitnessInvalid:
      return "InverseWitnessInvalid";
    case ErrorKind::OracleUnsound:
      return "OracleUnsound";
    case ErrorKind::NotTangent:
      return "NotTangent";
    case ErrorKind::NoBlockSplit:
      return "NoBlockSplit";
    case ErrorKind::AxiomOneUnwitnessed:
      return "AxiomOneUnwitnessed";
    case ErrorKind::SchemaError:
      return "SchemaError";
    case ErrorKind::UnknownName:
      return "UnknownName";
    case ErrorKind::JacobiViolation:
      return "JacobiViolation";
    case ErrorKind::MissingSection:
      return "MissingSection";
    case ErrorKind::Unsupported:
      return "Unsupported";
  }
  return "Error";
}

}  // namespace braid
