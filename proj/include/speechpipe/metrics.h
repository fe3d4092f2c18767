#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "speechpipe/decode.h"
#include "speechpipe/punc.h"
#include "speechpipe/vad_post.h"

namespace speechpipe {

// Binary frame labels on the evaluation grid (25 ms windows, 10 ms shift).
struct FrameLabels {
  std::vector<uint8_t> labels;
  double frame_shift_s = 0.010;
  double frame_len_s = 0.025;
};

struct VadFrameReport {
  double f1 = 0.0;         // percent, positive (voice) class
  double far = 0.0;        // percent, FP / (FP + TN)
  double mr = 0.0;         // percent, FN / (FN + TP)
  double precision = 0.0;  // percent
  double recall = 0.0;     // percent
  int64_t tp = 0, fp = 0, fn = 0, tn = 0;
};

// Frame t is voiced iff its window center t*shift + win/2 lies inside any
// segment (half-open [start, end)).
FrameLabels frame_labels_from_segments(const std::vector<Segment>& segments,
                                       double total_duration_s,
                                       double frame_shift_s = 0.010,
                                       double frame_len_s = 0.025);

VadFrameReport f1_far_mr(const FrameLabels& pred, const FrameLabels& ref);

// Rank-based (Mann-Whitney) AUC with midrank tie handling, in percent.
// Requires both classes present.
double auc_roc(std::span<const double> scores, const FrameLabels& ref);

struct CerOptions {
  // When set: drop whitespace and the four punctuation marks (either width)
  // and lowercase ASCII before comparing. Off by default; units are then raw
  // codepoints.
  bool normalize = false;
};

// levenshtein(ref, hyp) / len(ref) * 100 over codepoint units; may exceed
// 100. Empty (post-normalization) reference throws.
double cer(const std::string& ref, const std::string& hyp,
           const CerOptions& opts = {});

// Test-set-level CER: edit distance and reference length pooled over all
// utterances of the set.
class CerAccumulator {
 public:
  explicit CerAccumulator(const CerOptions& opts = {}) : opts_(opts) {}
  void add(const std::string& ref, const std::string& hyp);
  double value() const;  // percent
  int64_t utterances() const { return utterances_; }
  int64_t distance() const { return distance_; }
  int64_t ref_units() const { return ref_units_; }

 private:
  CerOptions opts_;
  int64_t distance_ = 0;
  int64_t ref_units_ = 0;
  int64_t utterances_ = 0;
};

// Unweighted mean (equal weight per test set).
double macro_average(std::span<const double> values);

struct PrfCounts {
  int64_t tp = 0, fp = 0, fn = 0;
  double precision() const { return tp + fp > 0 ? 100.0 * tp / (tp + fp) : 0.0; }
  double recall() const { return tp + fn > 0 ? 100.0 * tp / (tp + fn) : 0.0; }
  double f1() const {
    double denom = 2.0 * tp + fp + fn;
    return denom > 0 ? 100.0 * 2.0 * tp / denom : 0.0;
  }
};

struct PuncPrfReport {
  std::map<std::string, PrfCounts> per_class;  // four mark classes
  PrfCounts overall;  // micro over {comma, period, question}; exclamation
                      // excluded, none never counted
};

PuncPrfReport punc_prf(std::span<const PuncTag> ref_tags,
                       std::span<const PuncTag> hyp_tags);

enum class LidGranularity { kLanguage, kDialect };

// Utterance-level exact-match accuracy in percent. Dialect granularity
// requires both language and (optional) dialect to match.
double lid_accuracy(std::span<const LidResult> refs,
                    std::span<const LidResult> hyps, LidGranularity granularity);

}  // namespace speechpipe
