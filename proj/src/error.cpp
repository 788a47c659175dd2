#include "cogito/error.hpp"

namespace cogito {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::EmptyText: return "EmptyText";
    case ErrorCode::ActiveExists: return "ActiveExists";
    case ErrorCode::UnknownNeed: return "UnknownNeed";
    case ErrorCode::EmptyActionList: return "EmptyActionList";
    case ErrorCode::NotActive: return "NotActive";
    case ErrorCode::MalformedResponse: return "MalformedResponse";
    case ErrorCode::FileNotFound: return "FileNotFound";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::ZeroNorm: return "ZeroNorm";
    case ErrorCode::EmptyContext: return "EmptyContext";
    case ErrorCode::BackendUnavailable: return "BackendUnavailable";
    case ErrorCode::BackendError: return "BackendError";
    case ErrorCode::Timeout: return "Timeout";
    case ErrorCode::NoActions: return "NoActions";
    case ErrorCode::WrongStimulusKind: return "WrongStimulusKind";
    case ErrorCode::InvalidStimulus: return "InvalidStimulus";
    case ErrorCode::PreconditionViolation: return "PreconditionViolation";
    case ErrorCode::UnknownSentenceId: return "UnknownSentenceId";
    case ErrorCode::IoError: return "IoError";
    case ErrorCode::FixtureMiss: return "FixtureMiss";
  }
  return "Unknown";
}

}  // namespace cogito
