#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace corpaudit::utf8 {

// Byte offset of the first malformed sequence, or nullopt when `s` is valid
// UTF-8. Overlong forms, surrogates and code points above U+10FFFF are
// rejected.
std::optional<std::size_t> find_invalid(std::string_view s);

inline bool is_valid(std::string_view s) { return !find_invalid(s).has_value(); }

// Decodes valid UTF-8; throws std::invalid_argument otherwise.
std::vector<char32_t> decode(std::string_view s);

void append(std::string& out, char32_t cp);
std::string encode(const std::vector<char32_t>& cps);

// Number of code points. Input must be valid UTF-8.
std::size_t length(std::string_view s);

// Unicode White_Space property.
bool is_space(char32_t cp);

// Strips leading/trailing whitespace and collapses internal runs to one
// ASCII space.
std::string collapse_whitespace(std::string_view s);

std::string_view trim(std::string_view s);

}  // namespace corpaudit::utf8
