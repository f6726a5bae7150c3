#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace fpguard {

// Every failure carries a category so the CLI can map it to an exit status.
enum class ErrorCategory {
  kConfig,
  kContract,
  kFormat,
  kScoring,
  kEmptyProfile,
  kEvaluation,
  kIo,
};

std::string_view category_name(ErrorCategory category);

class Error : public std::runtime_error {
 public:
  Error(ErrorCategory category, const std::string& message)
      : std::runtime_error(message), category_(category) {}

  ErrorCategory category() const { return category_; }

 private:
  ErrorCategory category_;
};

class ConfigError : public Error {
 public:
  explicit ConfigError(const std::string& message)
      : Error(ErrorCategory::kConfig, message) {}
};

class ContractError : public Error {
 public:
  explicit ContractError(const std::string& message)
      : Error(ErrorCategory::kContract, message) {}
};

// Malformed input lines and version mismatches of persisted artifacts.
class FormatError : public Error {
 public:
  explicit FormatError(const std::string& message)
      : Error(ErrorCategory::kFormat, message) {}
};

class ScoringError : public Error {
 public:
  explicit ScoringError(const std::string& message)
      : Error(ErrorCategory::kScoring, message) {}
};

// A profile was requested from a dataset with no transactions.
class EmptyProfileError : public Error {
 public:
  explicit EmptyProfileError(const std::string& message)
      : Error(ErrorCategory::kEmptyProfile, message) {}
};

class EvaluationError : public Error {
 public:
  explicit EvaluationError(const std::string& message)
      : Error(ErrorCategory::kEvaluation, message) {}
};

class IoError : public Error {
 public:
  explicit IoError(const std::string& message)
      : Error(ErrorCategory::kIo, message) {}
};

}  // namespace fpguard
