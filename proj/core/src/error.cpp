#include "coword/error.hpp"

namespace coword {
namespace {

std::string locate(const std::string& message, const std::string& file,
                   std::size_t line) {
  if (file.empty()) return message;
  if (line == 0) return file + ": " + message;
  return file + ":" + std::to_string(line) + ": " + message;
}

}  // namespace

InputError::InputError(const std::string& message, std::string file,
                       std::size_t line)
    : Error(locate(message, file, line)),
      file_(std::move(file)),
      line_(line),
      message_(message) {}

}  // namespace coword
