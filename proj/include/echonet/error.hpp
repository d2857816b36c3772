#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace echonet {

// Base for every error the library raises. `code()` is a stable,
// machine-parseable identifier; `exit_code()` is what the CLI returns.
class Error : public std::runtime_error {
 public:
  Error(std::string code, const std::string& message, int exit_code)
      : std::runtime_error(message), code_(std::move(code)), exit_code_(exit_code) {}

  const std::string& code() const noexcept { return code_; }
  int exit_code() const noexcept { return exit_code_; }

 private:
  std::string code_;
  int exit_code_;
};

// Bad or inconsistent input data.
class DataError : public Error {
 public:
  explicit DataError(const std::string& message, std::string code = "data_error")
      : Error(std::move(code), message, 1) {}
};

// Invalid parameters, missing paths, unknown enum values.
class ConfigError : public Error {
 public:
  explicit ConfigError(const std::string& message) : Error("config_error", message, 2) {}
};

// One malformed record in a line-oriented input file.
class ParseError : public DataError {
 public:
  ParseError(std::size_t line, const std::string& message, std::string code = "parse_error")
      : DataError("line " + std::to_string(line) + ": " + message, std::move(code)),
        line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

// A record that is valid JSON but misses a required field.
class SchemaError : public ParseError {
 public:
  SchemaError(std::size_t line, const std::string& message)
      : ParseError(line, message, "schema_error") {}
};

class ConvergenceError : public DataError {
 public:
  ConvergenceError(const std::string& what, std::size_t iterations)
      : DataError(what + " did not converge after " + std::to_string(iterations) + " iterations",
                  "convergence_error"),
        iterations_(iterations) {}

  std::size_t iterations() const noexcept { return iterations_; }

 private:
  std::size_t iterations_;
};

class TrainingError : public DataError {
 public:
  explicit TrainingError(const std::string& message) : DataError(message, "training_error") {}
};

class EvaluationError : public DataError {
 public:
  explicit EvaluationError(const std::string& message) : DataError(message, "evaluation_error") {}
};

// Transport failure or protocol violation talking to a post scorer.
class ScorerError : public Error {
 public:
  explicit ScorerError(const std::string& message, std::string code = "scorer_error")
      : Error(std::move(code), message, 1) {}
};

class ScorerTimeout : public ScorerError {
 public:
  explicit ScorerTimeout(const std::string& message) : ScorerError(message, "scorer_timeout") {}
};

}  // namespace echonet
