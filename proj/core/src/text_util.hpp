#pragma once

#include <string>
#include <string_view>
#include <vector>

// Internal text helpers. Locale-independent by construction (from_chars /
// to_chars), so annotation and report files are stable across environments.
namespace meteraug::detail {

std::string_view trim(std::string_view text);

// Lines without terminators; tolerates \r\n and a missing final newline.
std::vector<std::string_view> split_lines(std::string_view text);

// Whitespace-separated tokens.
std::vector<std::string_view> split_tokens(std::string_view line);

bool parse_double(std::string_view token, double& out);
bool parse_int(std::string_view token, long long& out);

// Fixed-point decimal with the given precision, e.g. format_fixed(0.5, 6)
// == "0.500000".
std::string format_fixed(double value, int precision);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, std::string_view content);

}  // namespace meteraug::detail
