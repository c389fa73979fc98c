#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace kgrx {

std::vector<std::string> split(std::string_view line, char sep);

std::string trim(std::string_view s);

std::string lower(std::string_view s);

// Trimmed + lowercased form used wherever names are compared across sources.
std::string canonical_name(std::string_view s);

// Strict numeric parsing; `where` names the file/line for the error message.
double parse_double(const std::string& tok, const std::string& where);
long long parse_int(const std::string& tok, const std::string& where);

// Reads a whole text file into lines, tolerating trailing \r and a missing
// final newline. Throws ParseError when the file cannot be opened.
std::vector<std::string> read_lines(const std::string& path);

}  // namespace kgrx
