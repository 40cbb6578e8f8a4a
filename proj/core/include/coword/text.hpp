#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace coword {

// ASCII whitespace only; keyword text is otherwise left untouched.
std::string_view trim(std::string_view s) noexcept;

std::vector<std::string_view> split(std::string_view s, char sep);

// 100 * part / whole rounded half-up to an integer; 0 when whole == 0.
int percent_half_up(std::uint64_t part, std::uint64_t whole) noexcept;

std::string read_file(const std::string& path);
void write_file(const std::string& path, std::string_view contents);

// printf-style fixed notation in the C locale.
std::string format_fixed(double value, int decimals);

}  // namespace coword
