#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace rigcal {

enum class ErrorKind {
  NotARotation,
  NotUnitQuaternion,
  InvalidArgument,
  InvalidForgetting,
  NumericalBreakdown,
  RankDeficient,
  RankDeficientQL,
  NoData,
  ParseError,
  EmptyTrajectory,
  LengthMismatch,
  IoError,
};

const char* to_string(ErrorKind kind) noexcept;

/// Base of every error raised by the library. Data problems (bad files,
/// degenerate motion) and contract violations share this type; `kind()`
/// distinguishes them. File readers set `line()` (1-based, 0 when not tied to
/// a line).
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message, std::size_t line = 0);

  ErrorKind kind() const noexcept { return kind_; }
  std::size_t line() const noexcept { return line_; }

 protected:
  struct Formatted {};
  Error(Formatted, ErrorKind kind, const std::string& what, std::size_t line);

 private:
  ErrorKind kind_;
  std::size_t line_;
};

/// A malformed input line. `token` is the 0-based index of the offending
/// whitespace-separated token, or npos when the line as a whole is wrong
/// (e.g. token count). Structured files report line 0 and name the field.
class ParseError : public Error {
 public:
  static constexpr std::size_t npos = static_cast<std::size_t>(-1);

  ParseError(std::size_t line, std::size_t token, const std::string& message);

  std::size_t token() const noexcept { return token_; }

 private:
  std::size_t token_;
};

}  // namespace rigcal
