#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace poolcast {

/// Base error carrying a stable machine-parseable category.
/// The CLI prints errors as "<category>: <message>" on one line.
class Error : public std::runtime_error {
 public:
  Error(std::string category, const std::string& message)
      : std::runtime_error(message), category_(std::move(category)) {}

  const std::string& category() const { return category_; }

 private:
  std::string category_;
};

/// Malformed textual input (dates, numbers, file syntax).
class ParseError : public Error {
 public:
  explicit ParseError(const std::string& m) : Error("parse", m) {}
};

/// Invalid configuration (duplicate dims, bad periods, missing files).
class ConfigError : public Error {
 public:
  explicit ConfigError(const std::string& m) : Error("config", m) {}
};

/// Bad dataset content (duplicate dates, non-finite values, degenerate series).
class DataError : public Error {
 public:
  explicit DataError(const std::string& m) : Error("data", m) {}
};

/// Argument outside a function's mathematical domain.
class DomainError : public Error {
 public:
  explicit DomainError(const std::string& m) : Error("domain", m) {}
};

/// Pooling index outside the parameter arrays.
class IndexError : public Error {
 public:
  explicit IndexError(const std::string& m) : Error("index", m) {}
};

/// Imported forecast does not cover the evaluation dates.
class AlignmentError : public Error {
 public:
  explicit AlignmentError(const std::string& m) : Error("alignment", m) {}
};

/// Fold plan cannot be satisfied by the available data.
class PlanningError : public Error {
 public:
  explicit PlanningError(const std::string& m) : Error("planning", m) {}
};

/// Numerical failure (non-finite values, indefinite curvature).
class NumericalError : public Error {
 public:
  explicit NumericalError(const std::string& m) : Error("numerical", m) {}
};

/// A caller violated a documented precondition.
class ContractError : public Error {
 public:
  explicit ContractError(const std::string& m) : Error("contract", m) {}
};

/// Filesystem failure.
class IoError : public Error {
 public:
  explicit IoError(const std::string& m) : Error("io", m) {}
};

}  // namespace poolcast
