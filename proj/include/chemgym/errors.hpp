#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace chemgym {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Malformed data file. `line` is 1-based; 0 when no line applies.
struct ParseError : Error {
  ParseError(const std::string& what, std::size_t line)
      : Error(line ? "line " + std::to_string(line) + ": " + what : what), line(line) {}
  std::size_t line;
};

struct ValidationError : Error { using Error::Error; };
struct NotFound : Error { using Error::Error; };
struct CapacityExceeded : Error { using Error::Error; };
struct NoSolventPresent : Error { using Error::Error; };
struct DimensionMismatch : Error { using Error::Error; };
struct StepLimitExceeded : Error { using Error::Error; };
struct EmptyVessel : Error { using Error::Error; };
struct UnknownMethod : Error { using Error::Error; };
struct ConfigError : Error { using Error::Error; };
struct EpisodeDone : Error { using Error::Error; };
struct IndexOutOfRange : Error { using Error::Error; };
struct UnknownScenario : Error { using Error::Error; };

}  // namespace chemgym
