#pragma once

// Shared vocabulary types for the engagement pipeline.

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace engage {

/// Seconds since the Unix epoch, UTC.
using Timestamp = std::int64_t;

/// Anonymized dense user identifier.
using UserId = std::int32_t;

/// Edge weights and strengths are counts of transitions.
using Weight = std::int64_t;

enum class ErrorKind {
  parse,             // malformed transcript or artifact line
  ordering,          // timestamps regress beyond the allowed slack
  schema,            // missing column, bad field, negative id
  mapping_conflict,  // prior anonymization mapping disagrees
  domain,            // invalid numeric input (e.g. Gini of empty set)
  not_conversation,  // metrics requested for a network with n < 2
  insufficient_data,
  degenerate,        // zero-variance ensemble
  parameter,
  io,
};

std::string_view to_string(ErrorKind kind);

/// The single exception type thrown by the library. `line` is set for
/// errors tied to a position in an input file (1-based).
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message,
        std::optional<std::size_t> line = std::nullopt)
      : std::runtime_error(message), kind_(kind), line_(line) {}

  ErrorKind kind() const noexcept { return kind_; }
  std::optional<std::size_t> line() const noexcept { return line_; }

 private:
  ErrorKind kind_;
  std::optional<std::size_t> line_;
};

/// Floor division that rounds toward negative infinity.
constexpr std::int64_t floor_div(std::int64_t a, std::int64_t b) {
  std::int64_t q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

}  // namespace engage
