#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace onoma::text {

struct NormalizeOptions {
  bool strip_diacritics = false;
};

/// Canonical surname form: NFC, lowercase, trimmed, internal whitespace
/// collapsed to one ASCII space. Hyphens and apostrophes are kept.
/// Throws InputError on invalid UTF-8.
std::string normalize_surname(std::string_view raw, const NormalizeOptions& opts = {});

/// Unicode lowercase of a UTF-8 string (no other normalization).
std::string fold_case(std::string_view utf8);

/// Byte offsets of every code point start, plus a final entry equal to size().
/// Assumes well-formed UTF-8.
std::vector<std::size_t> code_point_offsets(std::string_view utf8);

std::size_t code_point_count(std::string_view utf8);

bool is_valid_utf8(std::string_view bytes);

/// True when `needle` occurs in `haystack` delimited on both sides by a
/// non-alphanumeric code point or the string edge. Both inputs are expected
/// case-folded already.
bool contains_whole_word(std::string_view haystack, std::string_view needle);

/// Splits on a single-byte delimiter, keeping empty fields.
std::vector<std::string_view> split(std::string_view line, char delim);

std::string_view trim(std::string_view s);

}  // namespace onoma::text
