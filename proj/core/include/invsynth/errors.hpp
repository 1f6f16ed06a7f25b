#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace invsynth {

/// Base class of everything the library throws on bad input or a failed
/// external interaction. Programming errors use std::logic_error instead.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class TypeError : public Error {
 public:
  using Error::Error;
};

class EvalError : public Error {
 public:
  using Error::Error;
};

/// Raised by the C-subset frontend. Carries a 1-based source position when
/// one is known (line == 0 otherwise).
class FrontendError : public Error {
 public:
  enum class Kind { Syntax, Unsupported, Undeclared };

  FrontendError(Kind kind, std::string message, std::size_t line = 0, std::size_t column = 0);

  Kind kind() const noexcept { return kind_; }
  std::size_t line() const noexcept { return line_; }
  std::size_t column() const noexcept { return column_; }
  const std::string& detail() const noexcept { return detail_; }

 private:
  Kind kind_;
  std::size_t line_;
  std::size_t column_;
  std::string detail_;
};

const char* to_string(FrontendError::Kind kind) noexcept;

class SExprError : public Error {
 public:
  SExprError(std::string message, std::size_t offset)
      : Error(std::move(message)), offset_(offset) {}
  std::size_t offset() const noexcept { return offset_; }

 private:
  std::size_t offset_;
};

/// The solver could not be run or produced output we cannot classify.
class SolverError : public Error {
 public:
  using Error::Error;
};

/// Raised by a proposer when it cannot produce a candidate at all
/// (transport failure after retries, non-2xx status, malformed reply).
class ProposerError : public Error {
 public:
  using Error::Error;
};

/// The response contained no candidate text. Keeps the raw reply for traces.
class ExtractionError : public Error {
 public:
  ExtractionError(std::string message, std::string raw_response)
      : Error(std::move(message)), raw_response_(std::move(raw_response)) {}
  const std::string& raw_response() const noexcept { return raw_response_; }

 private:
  std::string raw_response_;
};

}  // namespace invsynth
