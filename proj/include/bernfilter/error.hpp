#ifndef BERNFILTER_ERROR_HPP
#define BERNFILTER_ERROR_HPP

#include <stdexcept>
#include <string>

namespace bernfilter {

enum class ErrorCode {
  InvalidArgument,
  DimensionMismatch,
  OutOfRange,
  NonFinite,
  Io,
  Parse,
  Diverged,
  OracleCap,
  UnknownName,
  EnergyNotPsd,
};

/// Stable lowercase identifier, used in CLI error lines and by the C API.
const char* to_string(ErrorCode code) noexcept;

/// Every failure in the library is reported as an Error carrying a code.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& message) {
  throw Error(code, message);
}

}  // namespace bernfilter

#endif
