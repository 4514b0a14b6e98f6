#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace sessbot::text {

// Decodes UTF-8 into Unicode scalar values. Each byte of an ill-formed
// sequence decodes to U+FFFD, so the result is never longer than the input.
std::u32string decode_utf8(std::string_view bytes);

void append_utf8(std::string& out, char32_t cp);

// Number of Unicode scalar values in a UTF-8 string.
std::size_t scalar_count(std::string_view bytes);

// Unicode White_Space property.
bool is_space(char32_t cp) noexcept;

// Letter, digit or underscore. ASCII is exact; beyond ASCII this is a
// block-level approximation of the Unicode alphabetic/numeric classes
// (Latin, Greek, Cyrillic and the other alphabetic scripts, CJK, Hangul,
// full-width alphanumerics) that excludes punctuation and symbol blocks.
bool is_word_char(char32_t cp) noexcept;

// Splits on runs of Unicode whitespace. Tokens are returned as UTF-8.
std::vector<std::string> split_whitespace(std::string_view bytes);

}  // namespace sessbot::text
