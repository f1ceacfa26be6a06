#pragma once

#include <stdexcept>
#include <string>

namespace bianchi {

enum class ErrorCode {
  InvalidArgument = 1,
  Domain = 2,
  Pole = 3,
  OutOfRange = 4,
  Convergence = 5,
  Parse = 6,
  Io = 7,
  Internal = 8,
};

const char* error_code_name(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what) : std::runtime_error(what), code_(code) {}
  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace bianchi
