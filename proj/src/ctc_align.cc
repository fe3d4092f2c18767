#include "speechpipe/ctc_align.h"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>

#include "speechpipe/utf8.h"

namespace speechpipe {

namespace {

void validate_tokens(const CtcFrames& frames, std::span<const Token> tokens) {
  if (tokens.empty())
    throw InvalidArgumentError("forced_align: empty token sequence");
  for (const auto& tok : tokens) {
    if (tok.id == frames.blank_id)
      throw InvalidArgumentError(
          "forced_align: blank id inside the token sequence");
    if (tok.id < 0 || tok.id >= frames.vocab_size())
      throw InvalidArgumentError("forced_align: token id " +
                                 std::to_string(tok.id) +
                                 " outside vocabulary");
  }
  if (frames.blank_id < 0 || frames.blank_id >= frames.vocab_size())
    throw InvalidArgumentError("forced_align: blank id outside vocabulary");
}

int64_t min_feasible_frames(std::span<const Token> tokens) {
  int64_t n = static_cast<int64_t>(tokens.size());
  for (size_t i = 1; i < tokens.size(); ++i)
    if (tokens[i].id == tokens[i - 1].id) ++n;  // forced blank between repeats
  return n;
}

bool is_single_cjk(const std::string& text) {
  auto cps = utf8_decode(text);
  return cps.size() == 1 && is_cjk(cps[0]);
}

constexpr char kWordStartMarker[] = "\xE2\x96\x81";  // U+2581

bool has_word_start_marker(const std::string& text) {
  return text.rfind(kWordStartMarker, 0) == 0;
}

}  // namespace

std::vector<int> forced_align(const CtcFrames& frames,
                              std::span<const Token> tokens) {
  validate_tokens(frames, tokens);
  const int64_t t_total = frames.num_frames();
  const int64_t u = static_cast<int64_t>(tokens.size());
  const int64_t min_t = min_feasible_frames(tokens);
  if (t_total < min_t)
    throw InfeasibleAlignmentError(
        "forced_align: " + std::to_string(t_total) + " frames cannot carry " +
        std::to_string(u) + " tokens (need at least " + std::to_string(min_t) +
        ")");

  // Blank-interleaved state graph: even states are blanks, odd state s emits
  // tokens[(s-1)/2]. S = 2U+1 states.
  const int64_t s_total = 2 * u + 1;
  auto emit_log = [&](int64_t t, int64_t s) -> double {
    int id = (s % 2 == 0) ? frames.blank_id : tokens[(s - 1) / 2].id;
    return static_cast<double>(frames.log_probs(t, id));
  };
  auto skip_allowed = [&](int64_t s) {
    // s-2 -> s for odd s when adjacent tokens differ.
    return s % 2 == 1 && s >= 3 && tokens[(s - 1) / 2].id != tokens[(s - 3) / 2].id;
  };
  // Tie rule ("prefer emitting earlier"): on equal scores prefer the
  // predecessor that was emitting — stay for token states, the token
  // predecessor for blanks, and the token-skip over the blank path.
  auto prefer = [&](int64_t s, int64_t a, int64_t b) {
    auto rank = [&](int64_t pred) {
      if (s % 2 == 1) {
        if (pred == s) return 0;      // keep emitting this token
        if (pred == s - 2) return 1;  // arrive straight from previous token
        return 2;                     // arrive from blank
      }
      return pred == s - 1 ? 0 : 1;   // blank: prefer the emitting predecessor
    };
    return rank(a) <= rank(b) ? a : b;
  };

  MatrixD dp = MatrixD::Constant(t_total, s_total, kLogZero);
  MatrixT<int32_t> back = MatrixT<int32_t>::Constant(t_total, s_total, -1);

  dp(0, 0) = emit_log(0, 0);
  dp(0, 1) = emit_log(0, 1);
  for (int64_t t = 1; t < t_total; ++t) {
    for (int64_t s = 0; s < s_total; ++s) {
      int64_t best_pred = -1;
      double best = kLogZero;
      auto consider = [&](int64_t pred) {
        if (pred < 0 || dp(t - 1, pred) <= kLogZero) return;
        double score = dp(t - 1, pred);
        if (score > best) {
          best = score;
          best_pred = pred;
        } else if (score == best && best_pred >= 0) {
          best_pred = prefer(s, best_pred, pred);
        }
      };
      consider(s);
      consider(s - 1);
      if (skip_allowed(s)) consider(s - 2);
      if (best_pred >= 0) {
        dp(t, s) = best + emit_log(t, s);
        back(t, s) = static_cast<int32_t>(best_pred);
      }
    }
  }

  int64_t end_state;
  double final_blank = dp(t_total - 1, 2 * u);
  double final_token = dp(t_total - 1, 2 * u - 1);
  if (final_token <= kLogZero && final_blank <= kLogZero)
    throw InfeasibleAlignmentError("forced_align: no feasible path");
  end_state = final_token >= final_blank ? 2 * u - 1 : 2 * u;

  std::vector<int> path(t_total);
  int64_t s = end_state;
  for (int64_t t = t_total - 1; t >= 0; --t) {
    path[t] = (s % 2 == 0) ? -1 : static_cast<int>((s - 1) / 2);
    if (t > 0) s = back(t, s);
  }
  return path;
}

double path_log_prob(const CtcFrames& frames, std::span<const Token> tokens,
                     const std::vector<int>& path) {
  double total = 0.0;
  for (size_t t = 0; t < path.size(); ++t) {
    int id = path[t] < 0 ? frames.blank_id : tokens[path[t]].id;
    total += static_cast<double>(frames.log_probs(t, id));
  }
  return total;
}

std::vector<TokenSpan> token_timestamps(const std::vector<int>& path,
                                        const CtcFrames& frames,
                                        std::span<const Token> tokens) {
  std::vector<TokenSpan> spans;
  size_t t = 0;
  while (t < path.size()) {
    if (path[t] < 0) {
      ++t;
      continue;
    }
    int idx = path[t];
    size_t first = t;
    while (t < path.size() && path[t] == idx) ++t;
    if (idx >= static_cast<int>(tokens.size()))
      throw InvalidArgumentError("token_timestamps: path index out of range");
    spans.push_back({tokens[idx].id, tokens[idx].text,
                     first * frames.frame_shift_s,
                     t * frames.frame_shift_s});
  }
  return spans;
}

namespace {

struct WordPiece {
  std::string piece;  // marker stripped
  bool starts_word;
};

WordPiece classify_token(const std::string& text, size_t index,
                         bool prev_was_cjk) {
  if (text.empty())
    throw InvalidArgumentError("merge_words: empty token text at position " +
                               std::to_string(index));
  bool cjk = is_single_cjk(text);
  bool marked = has_word_start_marker(text);
  WordPiece out;
  out.starts_word = index == 0 || cjk || marked || prev_was_cjk;
  out.piece = marked ? text.substr(sizeof(kWordStartMarker) - 1) : text;
  return out;
}

}  // namespace

std::vector<WordSpan> merge_words(std::span<const TokenSpan> spans) {
  std::vector<WordSpan> words;
  bool prev_was_cjk = false;
  for (size_t i = 0; i < spans.size(); ++i) {
    const auto& span = spans[i];
    WordPiece wp = classify_token(span.token_text, i, prev_was_cjk);
    if (wp.starts_word) {
      words.push_back(
          {wp.piece, span.start_s, span.end_s, {static_cast<int>(i)}});
    } else {
      auto& w = words.back();
      w.word_text += wp.piece;
      w.start_s = std::min(w.start_s, span.start_s);
      w.end_s = std::max(w.end_s, span.end_s);
      w.token_indices.push_back(static_cast<int>(i));
    }
    prev_was_cjk = is_single_cjk(span.token_text);
  }
  return words;
}

std::vector<std::string> merge_word_texts(std::span<const std::string> tokens) {
  std::vector<std::string> words;
  bool prev_was_cjk = false;
  for (size_t i = 0; i < tokens.size(); ++i) {
    WordPiece wp = classify_token(tokens[i], i, prev_was_cjk);
    if (wp.starts_word) {
      words.push_back(wp.piece);
    } else {
      words.back() += wp.piece;
    }
    prev_was_cjk = is_single_cjk(tokens[i]);
  }
  return words;
}

namespace {

constexpr char kLogitsMagic[4] = {'S', 'P', 'C', 'L'};
constexpr uint32_t kLogitsVersion = 1;

void write_u32_le(std::ostream& out, uint32_t v) {
  unsigned char b[4] = {static_cast<unsigned char>(v & 0xFF),
                        static_cast<unsigned char>((v >> 8) & 0xFF),
                        static_cast<unsigned char>((v >> 16) & 0xFF),
                        static_cast<unsigned char>((v >> 24) & 0xFF)};
  out.write(reinterpret_cast<char*>(b), 4);
}

uint32_t read_u32_le(std::istream& in) {
  unsigned char b[4];
  in.read(reinterpret_cast<char*>(b), 4);
  return uint32_t(b[0]) | uint32_t(b[1]) << 8 | uint32_t(b[2]) << 16 |
         uint32_t(b[3]) << 24;
}

}  // namespace

void save_ctc_logits(const CtcFrames& frames, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw FormatError("cannot write logits dump: " + path);
  out.write(kLogitsMagic, 4);
  write_u32_le(out, kLogitsVersion);
  write_u32_le(out, static_cast<uint32_t>(frames.num_frames()));
  write_u32_le(out, static_cast<uint32_t>(frames.vocab_size()));
  write_u32_le(out, static_cast<uint32_t>(frames.blank_id));
  double shift = frames.frame_shift_s;
  out.write(reinterpret_cast<const char*>(&shift), sizeof(shift));
  out.write(reinterpret_cast<const char*>(frames.log_probs.data()),
            frames.log_probs.size() * sizeof(float));
  if (!out) throw FormatError("short write to logits dump: " + path);
}

CtcFrames load_ctc_logits(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError("cannot open logits dump: " + path);
  char magic[4];
  in.read(magic, 4);
  if (!in || std::memcmp(magic, kLogitsMagic, 4) != 0)
    throw FormatError("not a logits dump (bad magic): " + path);
  uint32_t version = read_u32_le(in);
  if (version != kLogitsVersion)
    throw FormatError("unsupported logits dump version: " + path);
  uint32_t t = read_u32_le(in);
  uint32_t v = read_u32_le(in);
  uint32_t blank = read_u32_le(in);
  double shift = 0;
  in.read(reinterpret_cast<char*>(&shift), sizeof(shift));
  if (!in) throw FormatError("truncated logits dump header: " + path);

  CtcFrames frames;
  frames.blank_id = static_cast<int>(blank);
  frames.frame_shift_s = shift;
  frames.log_probs.resize(t, v);
  in.read(reinterpret_cast<char*>(frames.log_probs.data()),
          frames.log_probs.size() * sizeof(float));
  if (!in) throw FormatError("truncated logits dump payload: " + path);
  return frames;
}

}  // namespace speechpipe
