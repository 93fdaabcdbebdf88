#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace dctwin {

// Base of every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed JSON; carries the byte offset reported by the parser.
class ParseError : public Error {
 public:
  ParseError(const std::string& message, std::size_t byte_offset)
      : Error(message), byte_offset_(byte_offset) {}
  std::size_t byte_offset() const { return byte_offset_; }

 private:
  std::size_t byte_offset_;
};

// A known key holds a JSON value of the wrong type.
class FieldTypeError : public Error {
 public:
  FieldTypeError(const std::string& path, const std::string& expected)
      : Error("field '" + path + "': expected " + expected), path_(path) {}
  const std::string& path() const { return path_; }

 private:
  std::string path_;
};

// Configuration failed validation.
class ValidationError : public Error {
 public:
  using Error::Error;
};

// Argument outside the documented domain of a model function.
class DomainError : public Error {
 public:
  using Error::Error;
};

// Trace CSV content problems. row is the 1-based data row (0 when not row specific).
class TraceError : public Error {
 public:
  TraceError(const std::string& message, std::size_t row = 0)
      : Error(row ? "row " + std::to_string(row) + ": " + message : message), row_(row) {}
  std::size_t row() const { return row_; }

 private:
  std::size_t row_;
};

class AlignError : public Error {
 public:
  using Error::Error;
};

// Environment misuse, e.g. stepping a finished episode.
class StateError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

class UsageError : public Error {
 public:
  using Error::Error;
};

}  // namespace dctwin
