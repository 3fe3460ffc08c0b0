#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

// Minimal UTF-8 utilities. Classification and case folding cover ASCII,
// Latin-1 Supplement and Latin Extended-A plus the common whitespace,
// punctuation and CJK blocks; code points outside those ranges pass through
// unchanged. Self-contained on purpose: tokenization must be byte-for-byte
// reproducible regardless of the host's locale or ICU version.
namespace bioprep::uni {

inline constexpr char32_t kReplacement = 0xFFFD;

// Decodes one code point starting at `i`; advances `i` past it. Invalid
// sequences decode to U+FFFD and advance one byte.
char32_t decode(std::string_view s, std::size_t& i);

void encode(char32_t cp, std::string& out);

std::vector<char32_t> decode_all(std::string_view s);

std::string encode_all(const std::vector<char32_t>& cps);

bool is_whitespace(char32_t cp);
bool is_control(char32_t cp);
bool is_punctuation(char32_t cp);
bool is_cjk(char32_t cp);
bool is_digit(char32_t cp);
bool is_upper(char32_t cp);
bool is_combining_mark(char32_t cp);

char32_t to_lower(char32_t cp);

// Decomposes Latin accented letters to their base letter and drops
// combining marks (the NFD-then-strip-Mn treatment, restricted to the
// Latin ranges above).
char32_t strip_accent(char32_t cp);  // returns 0 when cp is a pure mark

}  // namespace bioprep::uni
