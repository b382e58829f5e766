#include "amiedot/error.hpp"

namespace amiedot {

std::string_view error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::validation: return "validation-error";
    case ErrorCode::unknown_user: return "unknown-user";
    case ErrorCode::unknown_document: return "unknown-document";
    case ErrorCode::negative_duration: return "negative-duration";
    case ErrorCode::malformed_timestamp: return "malformed-timestamp";
    case ErrorCode::duplicate: return "duplicate-error";
    case ErrorCode::overlap: return "overlap-error";
    case ErrorCode::corrupt_log: return "corrupt-log";
    case ErrorCode::io: return "io-error";
    case ErrorCode::invalid_argument: return "invalid-argument";
    case ErrorCode::malformed_request: return "malformed-request";
  }
  return "validation-error";
}

Error::Error(ErrorCode code, std::string detail)
    : std::runtime_error(std::string(error_code_name(code)) + ": " + detail),
      code_(code),
      detail_(std::move(detail)) {}

Error::Error(ErrorCode code, std::string detail, Issues issues)
    : Error(code, std::move(detail)) {
  issues_ = std::move(issues);
}

void throw_if_any(const Issues& issues, std::string_view what) {
  if (issues.empty()) return;
  std::string detail(what);
  for (const auto& issue : issues) {
    detail += "; ";
    detail += issue.field;
    detail += ": ";
    detail += issue.message;
  }
  throw Error(issues.front().code, std::move(detail), issues);
}

}  // namespace amiedot
