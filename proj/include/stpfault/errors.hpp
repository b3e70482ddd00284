#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace stpfault {

enum class ErrorCode {
  Argument,
  Io,
  Parse,
  Dimension,
  Precondition,
  Unsupported,
  Internal,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what) : std::runtime_error(what), code_(code) {}
  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

class DimensionError : public Error {
 public:
  explicit DimensionError(const std::string& what) : Error(ErrorCode::Dimension, what) {}
};

/// STP of two matrices whose inner dimensions are not multiples of one another.
class UnsupportedDimensions : public Error {
 public:
  explicit UnsupportedDimensions(const std::string& what) : Error(ErrorCode::Unsupported, what) {}
};

class ArgumentError : public Error {
 public:
  explicit ArgumentError(const std::string& what) : Error(ErrorCode::Argument, what) {}
};

class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t line, std::size_t column)
      : Error(ErrorCode::Parse, std::to_string(line) + ":" + std::to_string(column) + ": " + what),
        line_(line),
        column_(column) {}

  std::size_t line() const noexcept { return line_; }
  std::size_t column() const noexcept { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

/// A syntactically valid network that breaks a structural rule (scoping, annotations).
class ValidationError : public Error {
 public:
  explicit ValidationError(const std::string& what) : Error(ErrorCode::Parse, what) {}
};

class PreconditionError : public Error {
 public:
  explicit PreconditionError(const std::string& what) : Error(ErrorCode::Precondition, what) {}
};

/// The algebraic assembly disagreed with direct evaluation. Always a bug.
class AssemblyInconsistency : public Error {
 public:
  explicit AssemblyInconsistency(const std::string& what) : Error(ErrorCode::Internal, what) {}
};

class IoError : public Error {
 public:
  explicit IoError(const std::string& what) : Error(ErrorCode::Io, what) {}
};

}  // namespace stpfault
