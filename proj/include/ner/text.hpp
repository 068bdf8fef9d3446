#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace ner {

// Minimal UTF-8 handling. Persian text is multi-byte in UTF-8, so anything
// counting "characters" (affix features, char rules) works on scalar values,
// not bytes. Invalid bytes are treated as single one-byte units rather than
// rejected; corpus files are validated elsewhere.

/// Byte length of the UTF-8 sequence starting at s[i].
inline size_t utf8_seq_len(unsigned char lead) {
  if (lead < 0x80) return 1;
  if ((lead >> 5) == 0x6) return 2;
  if ((lead >> 4) == 0xe) return 3;
  if ((lead >> 3) == 0x1e) return 4;
  return 1;
}

/// Number of Unicode scalars in s.
size_t utf8_length(std::string_view s);

/// Splits s into one std::string per Unicode scalar.
std::vector<std::string> utf8_chars(std::string_view s);

/// First n scalars of s (whole string if shorter).
std::string utf8_prefix(std::string_view s, size_t n);

/// Last n scalars of s (whole string if shorter).
std::string utf8_suffix(std::string_view s, size_t n);

/// True if s contains any ASCII whitespace byte.
bool contains_whitespace(std::string_view s);

/// Splits on runs of ASCII whitespace; no empty fields.
std::vector<std::string> split_ws(std::string_view s);

/// Splits on every occurrence of sep; keeps empty fields.
std::vector<std::string> split_char(std::string_view s, char sep);

std::string_view trim(std::string_view s);

}  // namespace ner
