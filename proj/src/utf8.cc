#include "speechpipe/utf8.h"

#include <cmath>

namespace speechpipe {

std::vector<char32_t> utf8_decode(const std::string& text) {
  std::vector<char32_t> out;
  out.reserve(text.size());
  size_t i = 0;
  const auto* bytes = reinterpret_cast<const unsigned char*>(text.data());
  while (i < text.size()) {
    unsigned char b = bytes[i];
    char32_t cp = 0xFFFD;
    size_t len = 1;
    if (b < 0x80) {
      cp = b;
    } else if ((b & 0xE0) == 0xC0) {
      len = 2;
      if (i + 1 < text.size() && (bytes[i + 1] & 0xC0) == 0x80) {
        cp = ((b & 0x1F) << 6) | (bytes[i + 1] & 0x3F);
        if (cp < 0x80) cp = 0xFFFD;
      }
    } else if ((b & 0xF0) == 0xE0) {
      len = 3;
      if (i + 2 < text.size() && (bytes[i + 1] & 0xC0) == 0x80 &&
          (bytes[i + 2] & 0xC0) == 0x80) {
        cp = ((b & 0x0F) << 12) | ((bytes[i + 1] & 0x3F) << 6) |
             (bytes[i + 2] & 0x3F);
        if (cp < 0x800) cp = 0xFFFD;
      }
    } else if ((b & 0xF8) == 0xF0) {
      len = 4;
      if (i + 3 < text.size() && (bytes[i + 1] & 0xC0) == 0x80 &&
          (bytes[i + 2] & 0xC0) == 0x80 && (bytes[i + 3] & 0xC0) == 0x80) {
        cp = (char32_t(b & 0x07) << 18) | ((bytes[i + 1] & 0x3F) << 12) |
             ((bytes[i + 2] & 0x3F) << 6) | (bytes[i + 3] & 0x3F);
        if (cp < 0x10000 || cp > 0x10FFFF) cp = 0xFFFD;
      }
    }
    out.push_back(cp);
    i += len;
  }
  return out;
}

std::string utf8_encode_one(char32_t cp) {
  std::string out;
  if (cp < 0x80) {
    out.push_back(static_cast<char>(cp));
  } else if (cp < 0x800) {
    out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else if (cp < 0x10000) {
    out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else {
    out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  }
  return out;
}

std::string utf8_encode(const std::vector<char32_t>& codepoints) {
  std::string out;
  for (char32_t cp : codepoints) out += utf8_encode_one(cp);
  return out;
}

bool is_cjk(char32_t cp) {
  return (cp >= 0x4E00 && cp <= 0x9FFF) ||    // CJK Unified Ideographs
         (cp >= 0x3400 && cp <= 0x4DBF) ||    // Extension A
         (cp >= 0xF900 && cp <= 0xFAFF) ||    // Compatibility Ideographs
         (cp >= 0x20000 && cp <= 0x2A6DF);    // Extension B
}

bool starts_cjk(const std::string& token) {
  if (token.empty()) return false;
  auto cps = utf8_decode(token);
  return !cps.empty() && is_cjk(cps.front());
}

bool is_ascii_space(char32_t cp) {
  return cp == U' ' || cp == U'\t' || cp == U'\n' || cp == U'\r';
}

double round_half_up(double value, int decimals) {
  double scale = std::pow(10.0, decimals);
  double scaled = value * scale;
  double rounded = std::floor(std::abs(scaled) + 0.5);
  return std::copysign(rounded, scaled) / scale;
}

}  // namespace speechpipe
