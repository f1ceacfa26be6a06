#include "bianchi/error.hpp"

namespace bianchi {

const char* error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidArgument: return "invalid_argument";
    case ErrorCode::Domain: return "domain_error";
    case ErrorCode::Pole: return "pole";
    case ErrorCode::OutOfRange: return "out_of_range";
    case ErrorCode::Convergence: return "convergence_failure";
    case ErrorCode::Parse: return "parse_error";
    case ErrorCode::Io: return "io_error";
    case ErrorCode::Internal: return "internal_error";
  }
  return "unknown";
}

}  // namespace bianchi
