#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace cssl {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Operand shapes do not agree.
class DimensionError : public Error {
 public:
  using Error::Error;
};

// Non-finite values, loss of definiteness, failed factorizations.
class NumericalError : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t line)
      : Error("line " + std::to_string(line) + ": " + what), line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

// Missing or unreadable files.
class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace cssl
