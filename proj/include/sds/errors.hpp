#ifndef SDS_ERRORS_HPP
#define SDS_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace sds {

enum class ErrorCode {
  NonConservative,
  NegativeOffDiagonal,
  Reducible,
  SingularSystem,
  EigenFailure,
  BracketFailure,
  HypothesisViolated,
  SigmaOutOfRange,
  UnknownFamily,
  GridMisaligned,
  OutOfHorizon,
  QOutOfRange,
  NonpositiveCurve,
  NoUsablePaths,
  AllPathsBlewUp,
  ConfigError,
};

const char* error_code_name(ErrorCode code);

class SdsError : public std::runtime_error {
 public:
  SdsError(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace sds

#endif
