#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace coword {

// Base for everything the library throws on purpose.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Bad input data: malformed files, unknown labels, missing artifacts.
// what() reads "<file>:<line>: <message>" when a location is known.
class InputError : public Error {
 public:
  explicit InputError(const std::string& message, std::string file = {},
                      std::size_t line = 0);

  const std::string& file() const noexcept { return file_; }
  std::size_t line() const noexcept { return line_; }
  const std::string& message() const noexcept { return message_; }

 private:
  std::string file_;
  std::size_t line_;
  std::string message_;
};

}  // namespace coword
