#include "sds/errors.hpp"

namespace sds {

const char* error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::NonConservative: return "NonConservative";
    case ErrorCode::NegativeOffDiagonal: return "NegativeOffDiagonal";
    case ErrorCode::Reducible: return "Reducible";
    case ErrorCode::SingularSystem: return "SingularSystem";
    case ErrorCode::EigenFailure: return "EigenFailure";
    case ErrorCode::BracketFailure: return "BracketFailure";
    case ErrorCode::HypothesisViolated: return "HypothesisViolated";
    case ErrorCode::SigmaOutOfRange: return "SigmaOutOfRange";
    case ErrorCode::UnknownFamily: return "UnknownFamily";
    case ErrorCode::GridMisaligned: return "GridMisaligned";
    case ErrorCode::OutOfHorizon: return "OutOfHorizon";
    case ErrorCode::QOutOfRange: return "QOutOfRange";
    case ErrorCode::NonpositiveCurve: return "NonpositiveCurve";
    case ErrorCode::NoUsablePaths: return "NoUsablePaths";
    case ErrorCode::AllPathsBlewUp: return "AllPathsBlewUp";
    case ErrorCode::ConfigError: return "ConfigError";
  }
  return "UnknownError";
}

}  // namespace sds
