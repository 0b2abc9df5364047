#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace condint {

enum class ErrorCode {
  InvalidParameter,
  Configuration,
  Precondition,
  Degenerate,
  EstimationFailed,
  SingularInformation,
  Contract,
  FailureCap,
  Io,
};

const char* to_string(ErrorCode code) noexcept;

/// Every failure raised by the library carries one of the codes above so the
/// C API and the CLI can map it to a status without string matching.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what) : std::runtime_error(what), code_(code) {}
  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

/// Optimizer gave up; the best point seen is kept for diagnostics.
class EstimationFailed : public Error {
 public:
  EstimationFailed(const std::string& what, std::vector<double> best_point, double best_value)
      : Error(ErrorCode::EstimationFailed, what),
        best_point_(std::move(best_point)),
        best_value_(best_value) {}

  const std::vector<double>& best_point() const noexcept { return best_point_; }
  double best_value() const noexcept { return best_value_; }

 private:
  std::vector<double> best_point_;
  double best_value_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) { throw Error(code, what); }

inline void require(bool cond, ErrorCode code, const std::string& what) {
  if (!cond) fail(code, what);
}

}  // namespace condint
