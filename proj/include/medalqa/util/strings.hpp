#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace medalqa::util {

std::string trim(std::string_view s);

// Lowercases ASCII A-Z only; multi-byte UTF-8 sequences pass through.
std::string ascii_lower(std::string_view s);

bool starts_with_ci(std::string_view s, std::string_view prefix);

// Lowercased alphanumeric token runs; everything else is a separator.
std::vector<std::string> alnum_tokens(std::string_view s);

// Whitespace-delimited tokens.
std::vector<std::string> whitespace_tokens(std::string_view s);

int count_words(std::string_view s);

std::string join(const std::vector<std::string>& parts, std::string_view sep);

std::string replace_all(std::string text, std::string_view what, std::string_view with);

}  // namespace medalqa::util
