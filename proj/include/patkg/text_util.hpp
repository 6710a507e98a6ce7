#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace patkg {

// Byte-oriented ASCII helpers. Claim text is ASCII in practice; non-ASCII
// bytes pass through untouched.

std::string ascii_lower(std::string_view text);

bool contains_digit(std::string_view token);

std::vector<std::string> split_whitespace(std::string_view text);

std::string join(const std::vector<std::string>& tokens, std::string_view sep);

}  // namespace patkg
