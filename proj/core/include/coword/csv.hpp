#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

// Comma-separated values with double-quote escaping. Quoted fields may span
// lines; a leading UTF-8 byte order mark is skipped.
namespace coword::csv {

struct Row {
  std::size_t line = 0;  // 1-based line where the row starts
  std::vector<std::string> fields;
};

// Blank lines are skipped. Throws InputError on an unterminated quote.
std::vector<Row> parse(std::string_view text, const std::string& source_name);

std::string quote(std::string_view field);
std::string format_row(std::span<const std::string> fields);

}  // namespace coword::csv
