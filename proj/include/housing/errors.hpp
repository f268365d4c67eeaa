#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace housing {

// Base of every error the library throws. Callers that only need to know
// "the input was bad" can catch this one.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// An input violates a documented invariant (negative distance, cp=7, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

class EmptyCohortError : public DomainError {
 public:
  using DomainError::DomainError;
};

// Rule or method configuration is incomplete or contradictory.
class ConfigError : public Error {
 public:
  using Error::Error;
};

// Unknown student, criterion or cohort identifier.
class LookupError : public Error {
 public:
  using Error::Error;
};

class DuplicateError : public Error {
 public:
  using Error::Error;
};

class NumericError : public Error {
 public:
  NumericError(const std::string& what, std::size_t iterations)
      : Error(what), iterations_(iterations) {}
  std::size_t iterations() const noexcept { return iterations_; }

 private:
  std::size_t iterations_;
};

// Malformed input text; line is 1-based and 0 when unknown.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t line)
      : Error(line ? "line " + std::to_string(line) + ": " + what : what), line_(line) {}
  std::size_t line() const noexcept { return line_; }

  // Same error with context (usually a file name) in front of the message.
  ParseError prefixed(const std::string& context) const {
    return ParseError(context + ": " + what(), line_, Raw{});
  }

 private:
  struct Raw {};
  ParseError(const std::string& full, std::size_t line, Raw) : Error(full), line_(line) {}
  std::size_t line_;
};

// Stored payload does not match its recorded digest.
class IntegrityError : public Error {
 public:
  using Error::Error;
};

}  // namespace housing
