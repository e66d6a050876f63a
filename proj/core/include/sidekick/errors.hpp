#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace sidekick {

// Invalid parameters (non-positive speeds, bad counts, out-of-range options).
class ConfigError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

// Malformed instance/solution/config text. `line` is 1-based, 0 if unknown.
class ParseError : public std::runtime_error {
public:
  ParseError(const std::string& what, std::size_t line)
    : std::runtime_error(what), line_(line) {}
  std::size_t line() const noexcept { return line_; }

private:
  std::size_t line_;
};

// Well-formed document missing a required field or carrying the wrong type.
class SchemaError : public std::runtime_error {
public:
  SchemaError(const std::string& what, std::string field)
    : std::runtime_error(what), field_(std::move(field)) {}
  const std::string& field() const noexcept { return field_; }

private:
  std::string field_;
};

// A sortie violating drone endurance.
class FeasibilityError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

// Structural problems in a solution (coverage, tour shape, sortie adjacency).
class ValidationError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

// Non-finite quantities encountered while training the scheduling policy.
class TrainingError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

} // namespace sidekick
