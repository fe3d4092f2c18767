#include "speechpipe/punc.h"

#include <array>

#include "speechpipe/utf8.h"

namespace speechpipe {

namespace {

// Mark glyphs per style, indexed by PuncTag (kNone unused).
std::string mark_for(PuncTag tag, LanguageStyle style) {
  const bool zh = style == LanguageStyle::kChineseFullwidth;
  switch (tag) {
    case PuncTag::kComma: return zh ? "，" : ",";
    case PuncTag::kPeriod: return zh ? "。" : ".";
    case PuncTag::kQuestion: return zh ? "？" : "?";
    case PuncTag::kExclamation: return zh ? "！" : "!";
    case PuncTag::kNone: return "";
  }
  return "";
}

// Recognizes the four marks in either width.
bool mark_from_codepoint(char32_t cp, PuncTag* tag) {
  switch (cp) {
    case U',': case U'，': case U'、': *tag = PuncTag::kComma; return true;
    case U'.': case U'。': *tag = PuncTag::kPeriod; return true;
    case U'?': case U'？': *tag = PuncTag::kQuestion; return true;
    case U'!': case U'！': *tag = PuncTag::kExclamation; return true;
    default: return false;
  }
}

// Marks outside the 5-way set that we map to none (reported, not inserted).
bool is_unsupported_mark(char32_t cp) {
  switch (cp) {
    case U':': case U';': case U'：': case U'；':
    case U'"': case U'“': case U'”':
    case U'\'': case U'‘': case U'’':
    case U'(': case U')': case U'（': case U'）':
    case U'、' - 0:  // never reached; kept for readability
      return true;
    default: return false;
  }
}

}  // namespace

std::string apply_tags(const TaggedText& tagged) {
  if (tagged.tokens.size() != tagged.tags.size())
    throw DimensionError("apply_tags: " + std::to_string(tagged.tokens.size()) +
                         " tokens vs " + std::to_string(tagged.tags.size()) +
                         " tags");
  std::string out;
  for (size_t i = 0; i < tagged.tokens.size(); ++i) {
    if (i > 0) {
      // Space only between consecutive non-CJK tokens.
      if (!starts_cjk(tagged.tokens[i]) && !starts_cjk(tagged.tokens[i - 1]))
        out += ' ';
    }
    out += tagged.tokens[i];
    out += mark_for(tagged.tags[i], tagged.style);
  }
  return out;
}

StripResult strip_punctuation(const std::string& text, LanguageStyle style) {
  StripResult result;
  result.tagged.style = style;
  auto cps = utf8_decode(text);

  std::string pending;  // current non-CJK token under construction
  auto flush_pending = [&] {
    if (!pending.empty()) {
      result.tagged.tokens.push_back(pending);
      result.tagged.tags.push_back(PuncTag::kNone);
      pending.clear();
    }
  };

  for (char32_t cp : cps) {
    PuncTag mark;
    if (mark_from_codepoint(cp, &mark)) {
      flush_pending();
      if (result.tagged.tags.empty()) {
        ++result.dropped_marks;  // mark with no preceding token
      } else if (result.tagged.tags.back() == PuncTag::kNone) {
        result.tagged.tags.back() = mark;
      } else {
        ++result.dropped_marks;  // consecutive marks keep the first
      }
    } else if (is_ascii_space(cp)) {
      flush_pending();
    } else if (is_cjk(cp)) {
      flush_pending();
      result.tagged.tokens.push_back(utf8_encode_one(cp));
      result.tagged.tags.push_back(PuncTag::kNone);
    } else if (is_unsupported_mark(cp)) {
      flush_pending();
      ++result.unsupported_marks;
    } else {
      pending += utf8_encode_one(cp);
    }
  }
  flush_pending();
  return result;
}

std::vector<PuncTag> tag(PuncTagger& tagger,
                         const std::vector<std::string>& tokens) {
  if (tokens.empty())
    throw InvalidArgumentError("tag: empty token sequence");
  for (const auto& t : tokens)
    if (t.empty()) throw InvalidArgumentError("tag: empty token string");
  auto tags = tagger.tag(tokens);
  if (tags.size() != tokens.size())
    throw ContractViolation("tagger returned " + std::to_string(tags.size()) +
                            " tags for " + std::to_string(tokens.size()) +
                            " tokens");
  return tags;
}

const char* tag_name(PuncTag tag) {
  switch (tag) {
    case PuncTag::kNone: return "none";
    case PuncTag::kComma: return "comma";
    case PuncTag::kPeriod: return "period";
    case PuncTag::kQuestion: return "question";
    case PuncTag::kExclamation: return "exclamation";
  }
  return "none";
}

PuncTag tag_from_name(const std::string& name) {
  if (name == "none") return PuncTag::kNone;
  if (name == "comma") return PuncTag::kComma;
  if (name == "period") return PuncTag::kPeriod;
  if (name == "question") return PuncTag::kQuestion;
  if (name == "exclamation") return PuncTag::kExclamation;
  throw FormatError("unknown punctuation tag name: " + name);
}

}  // namespace speechpipe
