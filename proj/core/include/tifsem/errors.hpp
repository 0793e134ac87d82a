#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace tifsem {

// Base class for every error raised by the toolkit.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed input text (XML, N-Triples, JSON documents). Line and column
// are 1-based; 0 means unknown.
class ParseError : public Error {
 public:
  ParseError(const std::string& message, std::size_t line, std::size_t column = 0)
      : Error(format(message, line, column)), line_(line), column_(column) {}

  std::size_t line() const noexcept { return line_; }
  std::size_t column() const noexcept { return column_; }

 private:
  static std::string format(const std::string& message, std::size_t line, std::size_t column) {
    if (line == 0) return message;
    std::string out = "line " + std::to_string(line);
    if (column != 0) out += ", column " + std::to_string(column);
    return out + ": " + message;
  }

  std::size_t line_;
  std::size_t column_;
};

// A dialect profile that references tags or canonical paths it cannot.
class ProfileError : public Error {
 public:
  using Error::Error;
};

// An IRI or name that is not known to the ontology snapshot.
class LookupError : public Error {
 public:
  using Error::Error;
};

// Rule documents with unknown relations, unknown IRIs or duplicates.
class RuleError : public Error {
 public:
  using Error::Error;
};

// IO content that violates an invariant at graph assertion time.
class AssertionError : public Error {
 public:
  using Error::Error;
};

// Query text that does not parse; offset is a 0-based byte position.
class QuerySyntaxError : public Error {
 public:
  QuerySyntaxError(const std::string& message, std::size_t offset, std::size_t line, std::size_t column)
      : Error("query syntax error at line " + std::to_string(line) + ", column " +
              std::to_string(column) + ": " + message),
        offset_(offset),
        line_(line),
        column_(column) {}

  std::size_t offset() const noexcept { return offset_; }
  std::size_t line() const noexcept { return line_; }
  std::size_t column() const noexcept { return column_; }

 private:
  std::size_t offset_;
  std::size_t line_;
  std::size_t column_;
};

// Ordering comparison between values of incomparable kinds.
class QueryTypeError : public Error {
 public:
  using Error::Error;
};

}  // namespace tifsem
