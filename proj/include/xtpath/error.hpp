#ifndef XTPATH_ERROR_HPP_
#define XTPATH_ERROR_HPP_

#include <cstddef>
#include <stdexcept>
#include <string>

namespace xtpath {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed XML. Carries the 1-based position of the offending character.
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

/// XPath text outside the supported absolute-path dialect.
class SyntaxError : public Error {
 public:
  using Error::Error;
};

class InputError : public Error {
 public:
  using Error::Error;
};

class SizeError : public Error {
 public:
  using Error::Error;
};

/// A shift edit whose anchor does not resolve in the document it is applied to.
class AnchorError : public Error {
 public:
  using Error::Error;
};

}  // namespace xtpath

#endif  // XTPATH_ERROR_HPP_
