#pragma once

// Deterministic stand-in components. The neural recognizers behind the
// Transcriber/LidIdentifier contracts are deployment artifacts; these
// table-driven versions drive tests and offline pipeline runs from JSON.

#include <utility>

#include "speechpipe/pipeline.h"

namespace speechpipe {

// Emits high posteriors inside the configured windows and low outside, on
// the standard drop-tail frame grid for the input's duration.
class WindowVoiceDetector : public VoiceDetector {
 public:
  WindowVoiceDetector(std::vector<std::pair<double, double>> windows,
                      double high = 0.95, double low = 0.05,
                      double frame_shift_s = 0.010,
                      double frame_len_s = 0.025);
  PosteriorTrack posteriors(const AudioBuffer& audio) override;

 private:
  std::vector<std::pair<double, double>> windows_;
  double high_, low_, shift_, len_;
};

// Replays a fixed script, one entry per transcribed segment in order.
// JSON: {"timestamps": bool, "utterances": [{"tokens": [..],
//        "posteriors": [..], "spans": [[start, end], ..]?}, ..]}
// Span times are seconds relative to the segment start.
class ScriptedTranscriber : public Transcriber {
 public:
  struct Entry {
    std::vector<std::string> tokens;
    std::vector<double> posteriors;
    std::optional<std::vector<std::pair<double, double>>> spans;
  };

  ScriptedTranscriber(std::vector<Entry> script, bool timestamps);
  static ScriptedTranscriber from_json(const std::string& text);

  TranscriberOutput transcribe(const AudioBuffer& segment) override;
  bool supports_timestamps() const override { return timestamps_; }
  int calls() const { return calls_; }

 private:
  std::vector<Entry> script_;
  bool timestamps_;
  int calls_ = 0;
};

// Replays fixed LID results per segment in order.
// JSON: {"results": [{"language": "zh", "dialect": "yue"?,
//                     "confidence": 0.9}, ..]}
class ScriptedLidIdentifier : public LidIdentifier {
 public:
  explicit ScriptedLidIdentifier(std::vector<LidResult> results);
  static ScriptedLidIdentifier from_json(const std::string& text);
  LidResult identify(const AudioBuffer& segment) override;

 private:
  std::vector<LidResult> results_;
  int calls_ = 0;
};

// Minimal rule tagger: a period after the final token of every call.
class FinalPeriodTagger : public PuncTagger {
 public:
  std::vector<PuncTag> tag(const std::vector<std::string>& tokens) override;
  bool thread_safe() const override { return true; }
};

}  // namespace speechpipe
