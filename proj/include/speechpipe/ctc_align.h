#pragma once

#include <span>
#include <string>
#include <vector>

#include "speechpipe/types.h"

namespace speechpipe {

// Frame-level CTC log posteriors. blank is id 0 by convention; frame_shift_s
// is the encoder frame period (feature shift times the subsampling rate).
struct CtcFrames {
  MatrixF log_probs;  // T x V
  int blank_id = 0;
  double frame_shift_s = 0.040;

  Eigen::Index num_frames() const { return log_probs.rows(); }
  Eigen::Index vocab_size() const { return log_probs.cols(); }
};

struct Token {
  int id = 0;
  std::string text;
};

struct TokenSpan {
  int token_id = 0;
  std::string token_text;
  double start_s = 0.0;
  double end_s = 0.0;
};

struct WordSpan {
  std::string word_text;
  double start_s = 0.0;
  double end_s = 0.0;
  std::vector<int> token_indices;  // indices into the TokenSpan list
};

// No alignment exists (sequence too long for the frame count).
class InfeasibleAlignmentError : public Error {
 public:
  using Error::Error;
};

// Large negative stand-in for log(0) in the DP; scores at or below this are
// treated as impossible.
constexpr double kLogZero = -1e30;

// Viterbi forced alignment through the blank-interleaved CTC state graph.
// Returns one entry per frame: -1 for blank, otherwise the position of the
// emitted token within `tokens`. Ties prefer entering and staying in token
// states (leftmost emission).
std::vector<int> forced_align(const CtcFrames& frames,
                              std::span<const Token> tokens);

// Log probability of an explicit state path (test/diagnostic helper).
double path_log_prob(const CtcFrames& frames, std::span<const Token> tokens,
                     const std::vector<int>& path);

// Token spans from the contiguous emission runs of a forced-alignment path:
// start = first frame * shift, end = (last frame + 1) * shift.
std::vector<TokenSpan> token_timestamps(const std::vector<int>& path,
                                        const CtcFrames& frames,
                                        std::span<const Token> tokens);

// Groups subword tokens into words: a leading U+2581 ("▁") marks a word
// start, a single CJK character token is always its own word, and the first
// token opens the first word. Word span = [min start, max end] of members.
std::vector<WordSpan> merge_words(std::span<const TokenSpan> spans);

// Same grouping on bare token texts (detokenization without timestamps).
std::vector<std::string> merge_word_texts(std::span<const std::string> tokens);

// Versioned binary dump: magic, version, T, V, blank id, frame shift,
// then row-major float32 log-probs. Lets alignment run with no model.
void save_ctc_logits(const CtcFrames& frames, const std::string& path);
CtcFrames load_ctc_logits(const std::string& path);

}  // namespace speechpipe
