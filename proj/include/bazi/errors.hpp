#pragma once

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace bazi {

enum class ErrorKind {
  Validation,  // malformed input values
  Range,       // outside the supported 1900-2100 window
  Numerical,   // iteration failed to converge
  Config,      // unknown template/profile versions, bad provider setup
  Transport,   // network/provider failure after retries
  Integrity,   // cache corruption
  Parse,       // malformed files / schema violations
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, std::string message)
      : std::runtime_error(std::move(message)), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

struct ValidationError : Error {
  explicit ValidationError(std::string m) : Error(ErrorKind::Validation, std::move(m)) {}
};

struct RangeError : Error {
  explicit RangeError(std::string m) : Error(ErrorKind::Range, std::move(m)) {}
};

struct NumericalError : Error {
  explicit NumericalError(std::string m) : Error(ErrorKind::Numerical, std::move(m)) {}
};

struct ConfigError : Error {
  explicit ConfigError(std::string m) : Error(ErrorKind::Config, std::move(m)) {}
};

// Carries the per-attempt log so callers can see what was retried.
struct TransportError : Error {
  TransportError(std::string m, std::vector<std::string> attempts = {})
      : Error(ErrorKind::Transport, std::move(m)), attempt_log(std::move(attempts)) {}
  std::vector<std::string> attempt_log;
};

struct IntegrityError : Error {
  explicit IntegrityError(std::string m) : Error(ErrorKind::Integrity, std::move(m)) {}
};

struct ParseError : Error {
  explicit ParseError(std::string m) : Error(ErrorKind::Parse, std::move(m)) {}
};

}  // namespace bazi
