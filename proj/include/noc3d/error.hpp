#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>

namespace noc3d {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A configuration or input value is out of contract. `field` names the
// offending key (dotted path for nested JSON) so front ends can report it.
class ConfigError : public Error {
 public:
  ConfigError(std::string field, const std::string& detail)
      : Error(field.empty() ? detail : field + ": " + detail), field_(std::move(field)), detail_(detail) {}

  const std::string& field() const noexcept { return field_; }
  const std::string& detail() const noexcept { return detail_; }

  // Same problem, reported under an enclosing path.
  ConfigError nested_in(const std::string& path) const {
    if (path.empty()) return *this;
    return {field_.empty() ? path : path + "." + field_, detail_};
  }

 private:
  std::string field_;
  std::string detail_;
};

class InvalidMove : public Error {
 public:
  using Error::Error;
};

class InfeasibleMove : public Error {
 public:
  using Error::Error;
};

class RoutingError : public Error {
 public:
  using Error::Error;
};

class DomainError : public Error {
 public:
  using Error::Error;
};

class ReferencePointError : public DomainError {
 public:
  using DomainError::DomainError;
};

class TrainingError : public Error {
 public:
  using Error::Error;
};

class AggregationError : public Error {
 public:
  using Error::Error;
};

// Malformed text input. Row and column are 1-based; 0 means "not applicable".
class ParseError : public Error {
 public:
  ParseError(std::size_t row, std::size_t column, const std::string& detail, const std::string& source = {})
      : Error(format(row, column, detail, source)), row_(row), column_(column), detail_(detail) {}

  std::size_t row() const noexcept { return row_; }
  std::size_t column() const noexcept { return column_; }
  const std::string& detail() const noexcept { return detail_; }

  ParseError with_source(const std::string& source) const { return {row_, column_, detail_, source}; }

 private:
  static std::string format(std::size_t row, std::size_t column, const std::string& detail,
                            const std::string& source) {
    std::string s = source.empty() ? std::string{} : source + ": ";
    if (row != 0) {
      s += "row " + std::to_string(row);
      if (column != 0) s += ", column " + std::to_string(column);
      s += ": ";
    }
    return s + detail;
  }

  std::size_t row_;
  std::size_t column_;
  std::string detail_;
};

}  // namespace noc3d
