#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace coreinv {

// Root of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DimensionError : public Error {
 public:
  using Error::Error;
};

// Raised by lu_solve when the factorization carries the singular flag.
class SingularSystem : public Error {
 public:
  using Error::Error;
};

// The input has index >= 2, so no core/group inverse exists.
class IndexExceedsOne : public Error {
 public:
  using Error::Error;
};

// A determinant-ratio path was asked for n > cramer_max_dim.
class DimensionTooLargeForDeterminantal : public Error {
 public:
  using Error::Error;
};

class NotAOneTwoInverse : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t line, std::size_t column)
      : Error("line " + std::to_string(line) + ", column " + std::to_string(column) + ": " + what),
        line_(line),
        column_(column) {}

  std::size_t line() const noexcept { return line_; }
  std::size_t column() const noexcept { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

class UnsupportedHeader : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace coreinv
