#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "speechpipe/audio.h"
#include "speechpipe/cmvn.h"
#include "speechpipe/ctc_align.h"
#include "speechpipe/decode.h"
#include "speechpipe/dfsmn.h"
#include "speechpipe/punc.h"
#include "speechpipe/vad_post.h"

namespace speechpipe {

// Posterior source for segmentation. The production implementation wraps
// fbank + CMVN + the DFSMN model; tests substitute deterministic tracks.
class VoiceDetector {
 public:
  virtual ~VoiceDetector() = default;
  virtual PosteriorTrack posteriors(const AudioBuffer& audio) = 0;
};

class DfsmnVoiceDetector : public VoiceDetector {
 public:
  DfsmnVoiceDetector(DfsmnModel model, FbankConfig fbank_cfg, CmvnStats stats);
  PosteriorTrack posteriors(const AudioBuffer& audio) override;

 private:
  DfsmnModel model_;
  FbankConfig fbank_cfg_;
  CmvnStats stats_;
};

// Utterance-level language identification over one audio segment.
class LidIdentifier {
 public:
  virtual ~LidIdentifier() = default;
  virtual LidResult identify(const AudioBuffer& segment) = 0;
};

struct TranscriberOutput {
  std::vector<std::string> tokens;
  std::vector<double> posteriors;                 // one per token
  std::optional<std::vector<TokenSpan>> spans;    // relative to segment start
};

// Segment-level speech recognizer contract. Neural recognizers live behind
// this interface; the toolkit ships mocks and file-driven lookups.
class Transcriber {
 public:
  virtual ~Transcriber() = default;
  virtual TranscriberOutput transcribe(const AudioBuffer& segment) = 0;
  virtual bool supports_timestamps() const = 0;
};

struct PipelineComponents {
  VoiceDetector* vad = nullptr;      // required
  Transcriber* transcriber = nullptr;  // required
  LidIdentifier* lid = nullptr;      // optional
  PuncTagger* tagger = nullptr;      // optional
};

struct PipelineConfig {
  PostprocessConfig vad_post;
  ConfidenceConfig confidence;
  LanguageStyle punc_style = LanguageStyle::kChineseFullwidth;
  int schema_version = 1;
};

struct SegmentResult {
  double start_s = 0.0;
  double end_s = 0.0;
  std::string text;
  double asr_confidence = 0.0;
  std::optional<std::string> language;
  std::optional<std::string> dialect;
  std::optional<double> lid_confidence;
  std::optional<std::vector<WordSpan>> word_spans;  // original timeline
};

struct SentenceSpan {
  std::string text;
  double start_s = 0.0;
  double end_s = 0.0;
};

struct TranscriptionResult {
  std::string text;
  std::vector<SegmentResult> segments;
  std::vector<Segment> vad_segments;
  std::optional<std::vector<SentenceSpan>> sentences;
  double audio_duration_s = 0.0;
  int sample_rate = 0;
};

// VAD -> per-segment LID -> transcription -> punctuation, all timestamps on
// the original waveform timeline. Empty VAD output yields an empty result.
TranscriptionResult transcribe(const AudioBuffer& audio,
                               const PipelineComponents& components,
                               const PipelineConfig& cfg = {});

// Sentences split after sentence-final tags (period/question/exclamation);
// commas continue. One tag per word, aligned with word_spans.
std::vector<SentenceSpan> sentence_timestamps(
    const std::vector<WordSpan>& word_spans, const std::vector<PuncTag>& tags,
    LanguageStyle style);

// Canonical versioned output JSON (schema in README). Deterministic:
// identical inputs serialize byte-identically; times and confidences are
// fixed to 1e-6 before printing.
std::string result_to_json(const TranscriptionResult& result, bool pretty = false);

}  // namespace speechpipe
