#include "condint/error.hpp"

namespace condint {

const char* to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::InvalidParameter: return "invalid-parameter";
    case ErrorCode::Configuration: return "configuration";
    case ErrorCode::Precondition: return "precondition";
    case ErrorCode::Degenerate: return "degenerate";
    case ErrorCode::EstimationFailed: return "estimation-failed";
    case ErrorCode::SingularInformation: return "singular-information";
    case ErrorCode::Contract: return "contract";
    case ErrorCode::FailureCap: return "failure-cap";
    case ErrorCode::Io: return "io";
  }
  return "unknown";
}

}  // namespace condint
