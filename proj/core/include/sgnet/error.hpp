#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace sgnet {

/// Base of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Bad argument or inconsistent dimensions.
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// Numerical breakdown: non-finite values, failed eigen-solve, CG stall, indefinite system.
class NumericalError : public Error {
 public:
  using Error::Error;
};

/// Training stopped because the risk or its gradient became non-finite.
class TrainingAborted : public Error {
 public:
  TrainingAborted(const std::string& what, std::size_t epoch)
      : Error(what), epoch_(epoch) {}
  std::size_t epoch() const noexcept { return epoch_; }

 private:
  std::size_t epoch_;
};

/// Malformed experiment configuration, with a 1-based source position.
class ConfigError : public Error {
 public:
  ConfigError(const std::string& what, std::size_t line, std::size_t column)
      : Error("line " + std::to_string(line) + ", column " +
              std::to_string(column) + ": " + what),
        line_(line),
        column_(column) {}
  std::size_t line() const noexcept { return line_; }
  std::size_t column() const noexcept { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

/// File could not be read or written.
class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace sgnet
