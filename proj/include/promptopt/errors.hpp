#pragma once

#include <stdexcept>
#include <string>

namespace promptopt {

// Base class for every error raised by the engine. CLI exit-code mapping:
// ConfigError -> 2, ProviderError -> 3, BudgetExceeded -> 4, anything else -> 1.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Invalid manifest, dataset schema, or pre-flight validation failure.
class ConfigError : public Error {
 public:
  using Error::Error;
};

// Malformed record in a dataset file; carries the 1-based line number.
class ParseError : public ConfigError {
 public:
  ParseError(std::size_t line, const std::string& what)
      : ConfigError("line " + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

// Rows disagree on columns, or a declared column is absent.
class SchemaError : public ConfigError {
 public:
  using ConfigError::ConfigError;
};

// A template slot has no matching dataset column.
class MissingColumn : public ConfigError {
 public:
  explicit MissingColumn(const std::string& name)
      : ConfigError("no column for slot '" + name + "'"), name_(name) {}
  const std::string& name() const { return name_; }

 private:
  std::string name_;
};

class EmptyDataset : public ConfigError {
 public:
  using ConfigError::ConfigError;
};

// Backend-side failures.
class ProviderError : public Error {
 public:
  using Error::Error;
};

// Network failure or retryable status persisting after all retries.
class TransportError : public ProviderError {
 public:
  using ProviderError::ProviderError;
};

// Non-retryable backend response (4xx, malformed payload).
class BackendError : public ProviderError {
 public:
  BackendError(int status, const std::string& body)
      : ProviderError("backend error " + std::to_string(status) + ": " + body),
        status_(status),
        body_(body) {}
  int status() const { return status_; }
  const std::string& body() const { return body_; }

 private:
  int status_;
  std::string body_;
};

// The run's provider-call cap was hit; the run aborts with a partial ledger.
class BudgetExceeded : public Error {
 public:
  using Error::Error;
};

// Gradient model returned an empty critique.
class EmptyGradient : public ProviderError {
 public:
  using ProviderError::ProviderError;
};

// A batch operation received zero inputs.
class EmptyBatch : public Error {
 public:
  using Error::Error;
};

// UCB requested for an entry that has never been evaluated.
class UnevaluatedEntry : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace promptopt
