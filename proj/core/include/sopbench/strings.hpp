#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace sopbench {

std::string to_lower(std::string_view s);
std::string_view trim(std::string_view s);
std::string collapse_whitespace(std::string_view s);

// lowercase + trim + collapse internal whitespace; the TypeText match normalization.
std::string normalize_text(std::string_view s);

std::vector<std::string> split_lines(std::string_view s);

// Whitespace-delimited token count (the contract-bearing orderings only
// depend on relative counts, so no model tokenizer is involved).
int count_tokens(std::string_view s);

// True when the keyword's word sequence appears as contiguous word tokens
// of `text`, case-insensitively. "agree" matches "Agree and continue" but
// "no" does not match "Notifications".
bool contains_word_sequence(std::string_view text, std::string_view keyword);

std::string replace_first(std::string_view tmpl, std::string_view what, std::string_view with);

}  // namespace sopbench
