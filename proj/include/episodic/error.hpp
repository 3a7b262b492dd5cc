#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace episodic {

enum class ErrorCode {
  UnresolvedMark,
  DescriptionMismatch,
  GapExceedsTolerance,
  DegenerateOrder,
  TargetNotFound,
  IllegalParameter,
  SeedCoversNegative,
  DuplicateId,
  UnknownRule,
  MissingEdge,
  ClassMismatch,
  VersionMismatch,
  ParseError,
  SchemaViolation,
  NonMonotoneInterval,
  ConfigError,
  IoError,
};

std::string_view to_string(ErrorCode code);

// Every failure raised by the library carries one of the codes above so
// callers (and tests) can branch on the kind without parsing messages.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

// ParseError with a 1-based line (and optional column) position.
class ParseError : public Error {
 public:
  ParseError(std::size_t line, const std::string& message, std::size_t column = 0)
      : Error(ErrorCode::ParseError, format(line, column, message)), line_(line), column_(column) {}
  ParseError(ErrorCode code, std::size_t line, const std::string& message, std::size_t column = 0)
      : Error(code, format(line, column, message)), line_(line), column_(column) {}

  std::size_t line() const noexcept { return line_; }
  std::size_t column() const noexcept { return column_; }

 private:
  static std::string format(std::size_t line, std::size_t column, const std::string& message) {
    std::string out = "line " + std::to_string(line);
    if (column) out += ":" + std::to_string(column);
    return out + ": " + message;
  }

  std::size_t line_;
  std::size_t column_;
};

}  // namespace episodic
