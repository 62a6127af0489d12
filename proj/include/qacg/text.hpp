#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace qacg {

/// ASCII case folding; non-ASCII bytes pass through unchanged.
std::string casefold(std::string_view text);

std::string_view trim(std::string_view text);

/// Splits on runs of whitespace.
std::vector<std::string> split_whitespace(std::string_view text);

/// Case-folded alphanumeric word tokens (any other byte separates words,
/// bytes >= 0x80 are treated as word characters).
std::vector<std::string> word_tokens(std::string_view text);

std::string join(const std::vector<std::string>& parts, std::string_view sep);

std::string hex64(std::uint64_t value);

/// True if `needle` occurs in `haystack` with no word character directly on
/// either side.
bool contains_word_bounded(std::string_view haystack, std::string_view needle);

}  // namespace qacg
