#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace cogito {

enum class ErrorCode {
  EmptyText,
  ActiveExists,
  UnknownNeed,
  EmptyActionList,
  NotActive,
  MalformedResponse,
  FileNotFound,
  ParseError,
  DimensionMismatch,
  ZeroNorm,
  EmptyContext,
  BackendUnavailable,
  BackendError,
  Timeout,
  NoActions,
  WrongStimulusKind,
  InvalidStimulus,
  PreconditionViolation,
  UnknownSentenceId,
  IoError,
  FixtureMiss,
};

std::string_view to_string(ErrorCode code);

// Every failure the library reports carries one of the codes above.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

// Backend failures additionally carry the HTTP status (0 when not applicable).
class BackendFailure : public Error {
 public:
  BackendFailure(ErrorCode code, const std::string& message, int status = 0)
      : Error(code, message), status_(status) {}

  int status() const noexcept { return status_; }

 private:
  int status_;
};

}  // namespace cogito
