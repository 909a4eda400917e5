#include "rigcal/error.hpp"

namespace rigcal {

const char* to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::NotARotation: return "NotARotation";
    case ErrorKind::NotUnitQuaternion: return "NotUnitQuaternion";
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::InvalidForgetting: return "InvalidForgetting";
    case ErrorKind::NumericalBreakdown: return "NumericalBreakdown";
    case ErrorKind::RankDeficient: return "RankDeficient";
    case ErrorKind::RankDeficientQL: return "RankDeficientQL";
    case ErrorKind::NoData: return "NoData";
    case ErrorKind::ParseError: return "ParseError";
    case ErrorKind::EmptyTrajectory: return "EmptyTrajectory";
    case ErrorKind::LengthMismatch: return "LengthMismatch";
    case ErrorKind::IoError: return "IoError";
  }
  return "Unknown";
}

namespace {

std::string locate(std::size_t line, std::size_t token, const std::string& message) {
  if (line == 0) return message;
  std::string where = "line " + std::to_string(line);
  if (token != ParseError::npos) where += ", token " + std::to_string(token);
  return where + ": " + message;
}

}  // namespace

Error::Error(ErrorKind kind, const std::string& message, std::size_t line)
    : Error(Formatted{}, kind, locate(line, ParseError::npos, message), line) {}

Error::Error(Formatted, ErrorKind kind, const std::string& what, std::size_t line)
    : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind), line_(line) {}

ParseError::ParseError(std::size_t line, std::size_t token, const std::string& message)
    : Error(Formatted{}, ErrorKind::ParseError, locate(line, token, message), line), token_(token) {}

}  // namespace rigcal
