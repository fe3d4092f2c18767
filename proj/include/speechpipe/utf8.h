#pragma once

#include <string>
#include <vector>

namespace speechpipe {

// Minimal UTF-8 helpers for the tokenization and CER code paths. Invalid
// byte sequences decode to U+FFFD rather than throwing; ASR text is not
// trusted to be clean.
std::vector<char32_t> utf8_decode(const std::string& text);
std::string utf8_encode(const std::vector<char32_t>& codepoints);
std::string utf8_encode_one(char32_t cp);

// Han ideographs (the character classes treated as per-character word units).
bool is_cjk(char32_t cp);
// True when the first codepoint of the token is CJK.
bool starts_cjk(const std::string& token);
bool is_ascii_space(char32_t cp);

// Rounds half away from zero at `decimals` places. Presentation-only; raw
// metric values are kept at full precision.
double round_half_up(double value, int decimals);

}  // namespace speechpipe
