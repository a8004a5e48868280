#pragma once

#include <stdexcept>
#include <string>

namespace shelfcast {

enum class ErrorCode {
  kInvalidArgument = 1,
  kIo = 2,
  kParse = 3,
  kEmpty = 4,
  kNumeric = 5,
  kVersion = 6,
  kPartial = 7,
};

// Single exception type for the core. The C API maps `code()` onto its
// status enum, so every throw site picks the code that best describes the
// failure instead of relying on the exception's dynamic type.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] void fail(ErrorCode code, const std::string& what);

inline void require(bool ok, const std::string& what) {
  if (!ok) fail(ErrorCode::kInvalidArgument, what);
}

}  // namespace shelfcast
