#pragma once

#include <stdexcept>
#include <string>

namespace ftdetect {

/// Failure category. The CLI maps each one to a process exit code.
enum class ErrorKind {
  kUsage = 1,
  kData = 2,
  kModel = 3,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(message), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

/// Corpus, vocabulary or feature problems with the input data.
class DataError : public Error {
 public:
  explicit DataError(const std::string& message)
      : Error(ErrorKind::kData, message) {}
};

/// Malformed, corrupt or mismatched model artifacts.
class ModelError : public Error {
 public:
  explicit ModelError(const std::string& message)
      : Error(ErrorKind::kModel, message) {}
};

/// Bad configuration values or invalid arguments.
class UsageError : public Error {
 public:
  explicit UsageError(const std::string& message)
      : Error(ErrorKind::kUsage, message) {}
};

}  // namespace ftdetect
