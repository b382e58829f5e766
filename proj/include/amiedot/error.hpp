#pragma once

#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace amiedot {

enum class ErrorCode {
  validation,
  unknown_user,
  unknown_document,
  negative_duration,
  malformed_timestamp,
  duplicate,
  overlap,
  corrupt_log,
  io,
  invalid_argument,
  malformed_request,
};

/// Stable wire name, e.g. "unknown-user". Used in CLI messages and HTTP error bodies.
std::string_view error_code_name(ErrorCode code);

/// One violated constraint found by a validator.
struct Issue {
  ErrorCode code = ErrorCode::validation;
  std::string field;
  std::string message;

  bool operator==(const Issue&) const = default;
};

using Issues = std::vector<Issue>;

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, std::string detail);
  Error(ErrorCode code, std::string detail, Issues issues);

  ErrorCode code() const noexcept { return code_; }
  const std::string& detail() const noexcept { return detail_; }
  const Issues& issues() const noexcept { return issues_; }

  // Set for overlap errors: the stored event the rejected one collides with.
  const std::string& conflicting_ref() const noexcept { return conflicting_ref_; }
  Error& with_conflict(std::string ref) {
    conflicting_ref_ = std::move(ref);
    return *this;
  }

  // Set for corrupt-log errors (1-based).
  std::size_t line() const noexcept { return line_; }
  Error& at_line(std::size_t line) {
    line_ = line;
    return *this;
  }

 private:
  ErrorCode code_;
  std::string detail_;
  Issues issues_;
  std::string conflicting_ref_;
  std::size_t line_ = 0;
};

/// Throws an Error built from the first issue's code when the list is nonempty.
void throw_if_any(const Issues& issues, std::string_view what);

}  // namespace amiedot
