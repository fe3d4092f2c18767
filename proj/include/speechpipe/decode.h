#pragma once

#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "speechpipe/types.h"

namespace speechpipe {

// Autoregressive next-token distribution over a fixed vocabulary. The prefix
// always begins with the start token. Implementations must be deterministic
// per prefix and safe for concurrent queries (or wrapped per call).
class SequenceScorer {
 public:
  virtual ~SequenceScorer() = default;
  virtual int vocab_size() const = 0;
  virtual int sos_id() const = 0;
  virtual int eos_id() const = 0;
  // Normalized posterior over the next token given the prefix.
  virtual std::vector<double> next_distribution(
      std::span<const int> prefix) const = 0;
};

struct Hypothesis {
  std::vector<int> tokens;         // includes sos, and eos when terminated
  std::vector<double> posteriors;  // one per non-special emitted token
  double score = 0.0;              // sum of log posteriors incl. the eos step
  bool ended = false;

  std::vector<int> label_tokens(int sos, int eos) const;
};

// Length-bounded beam search; hypotheses end at the end token or max_len
// emissions, ranked by total log score.
std::vector<Hypothesis> beam_search(const SequenceScorer& scorer,
                                    int beam_size, int max_len);

struct ConfidenceConfig {
  double clip_min = 0.0;
  double clip_max = 1.0;
  enum class OutlierRule { kNone, kDropBeyondKSigma };
  OutlierRule outlier_rule = OutlierRule::kNone;
  double k_sigma = 3.0;
};

struct ConfidenceResult {
  double value = 0.0;
  bool has_tokens = false;  // false => sentinel 0, no valid tokens
};

// Geometric mean of the non-special token posteriors, after optional
// outlier filtering, clipped to [clip_min, clip_max].
ConfidenceResult geometric_confidence(const Hypothesis& hyp,
                                      const ConfidenceConfig& cfg = {});

// Language/dialect label registry. Dialect codes are valid only after "zh".
class LidLabelRegistry {
 public:
  static const LidLabelRegistry& standard();

  struct Entry {
    std::string code;
    std::string english_name;
    std::string chinese_name;
  };

  int sos_id() const { return 0; }
  int eos_id() const { return 1; }
  int vocab_size() const;

  bool is_language_token(int id) const;
  bool is_dialect_token(int id) const;
  int token_id(const std::string& code) const;  // throws on unknown code
  const std::string& code(int id) const;        // throws on non-label id

  const std::vector<Entry>& languages() const { return languages_; }
  const std::vector<Entry>& dialects() const { return dialects_; }

  std::string to_json() const;

 private:
  LidLabelRegistry();
  std::vector<Entry> languages_;
  std::vector<Entry> dialects_;
  std::map<std::string, int> code_to_id_;
};

struct LidResult {
  std::string language;
  std::optional<std::string> dialect;
  double confidence = 0.0;

  bool operator==(const LidResult&) const = default;
};

// The best hypothesis violated the label structure (unknown token, dialect
// without zh, ...). Carries the raw hypothesis for diagnostics.
class LidDecodeError : public Error {
 public:
  LidDecodeError(const std::string& message, Hypothesis hyp)
      : Error(message), hypothesis(std::move(hyp)) {}
  Hypothesis hypothesis;
};

// Two-token hierarchical decoding: language first, optional zh dialect
// second. Confidence is the arithmetic mean of the label-token posteriors
// (special tokens excluded).
LidResult lid_decode(const SequenceScorer& scorer,
                     const LidLabelRegistry& registry, int beam_size = 4);

// Mock scorer backed by an explicit prefix -> distribution table, loadable
// from JSON for tests:
//   {"vocab_size": V, "sos": 0, "eos": 1,
//    "table": {"": [..V..], "2": [..], "2,3": [..]}, "default": [..]}
// Keys list the emitted token ids after sos, comma-separated.
class TableScorer : public SequenceScorer {
 public:
  TableScorer(int vocab_size, int sos, int eos);
  static TableScorer from_json(const std::string& text);

  void set(const std::vector<int>& emitted, std::vector<double> distribution);
  void set_default(std::vector<double> distribution);

  int vocab_size() const override { return vocab_size_; }
  int sos_id() const override { return sos_; }
  int eos_id() const override { return eos_; }
  std::vector<double> next_distribution(
      std::span<const int> prefix) const override;

 private:
  int vocab_size_, sos_, eos_;
  std::map<std::vector<int>, std::vector<double>> table_;
  std::optional<std::vector<double>> default_;
};

}  // namespace speechpipe
