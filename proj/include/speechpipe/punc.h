#pragma once

#include <string>
#include <vector>

#include "speechpipe/types.h"

namespace speechpipe {

// 5-way tag set: no mark plus the four marks inserted after a token.
enum class PuncTag { kNone, kComma, kPeriod, kQuestion, kExclamation };

enum class LanguageStyle { kChineseFullwidth, kEnglishHalfwidth };

struct TaggedText {
  std::vector<std::string> tokens;
  std::vector<PuncTag> tags;  // one per token
  LanguageStyle style = LanguageStyle::kChineseFullwidth;
};

// Token-level punctuation predictor contract: tokens in, one tag per token
// out. Implementations declare whether concurrent calls are safe.
class PuncTagger {
 public:
  virtual ~PuncTagger() = default;
  virtual std::vector<PuncTag> tag(const std::vector<std::string>& tokens) = 0;
  virtual bool thread_safe() const { return false; }
};

// Renders tokens with their marks: full-width marks for Chinese style,
// half-width for English. CJK tokens join without separators; consecutive
// non-CJK tokens get a single space (after any mark).
std::string apply_tags(const TaggedText& tagged);

struct StripResult {
  TaggedText tagged;
  int dropped_marks = 0;      // consecutive in-set marks beyond the first
  int unsupported_marks = 0;  // marks outside the 5-way set, mapped to none
};

// Inverse of apply_tags for clean text: removes the four marks (either
// width), assigning each to the preceding token. Tokenization: CJK per
// character, non-CJK split on whitespace.
StripResult strip_punctuation(const std::string& text, LanguageStyle style);

// Validating dispatch through a tagger.
std::vector<PuncTag> tag(PuncTagger& tagger,
                         const std::vector<std::string>& tokens);

const char* tag_name(PuncTag tag);
PuncTag tag_from_name(const std::string& name);

}  // namespace speechpipe
