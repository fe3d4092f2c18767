#include "speechpipe/pipeline.h"

#include <algorithm>
#include <cmath>

#include "json.hpp"
#include "speechpipe/utf8.h"

namespace speechpipe {

DfsmnVoiceDetector::DfsmnVoiceDetector(DfsmnModel model, FbankConfig fbank_cfg,
                                       CmvnStats stats)
    : model_(std::move(model)), fbank_cfg_(fbank_cfg), stats_(std::move(stats)) {}

PosteriorTrack DfsmnVoiceDetector::posteriors(const AudioBuffer& audio) {
  FeatureMatrix feats = compute_fbank(audio, fbank_cfg_);
  feats = apply_cmvn(feats, stats_);
  return forward_full(model_, feats);
}

namespace {

std::string join_texts(const std::string& a, const std::string& b) {
  if (a.empty() || b.empty()) return a + b;
  auto a_cps = utf8_decode(a);
  auto b_cps = utf8_decode(b);
  bool space = !is_cjk(a_cps.back()) && !is_cjk(b_cps.front());
  return space ? a + " " + b : a + b;
}

std::string segment_context(const Segment& seg) {
  return "segment [" + std::to_string(seg.start_s) + ", " +
         std::to_string(seg.end_s) + "): ";
}

}  // namespace

std::vector<SentenceSpan> sentence_timestamps(
    const std::vector<WordSpan>& word_spans, const std::vector<PuncTag>& tags,
    LanguageStyle style) {
  if (word_spans.size() != tags.size())
    throw DimensionError("sentence_timestamps: " +
                         std::to_string(word_spans.size()) + " words vs " +
                         std::to_string(tags.size()) + " tags");
  std::vector<SentenceSpan> sentences;
  TaggedText current;
  current.style = style;
  double start = 0.0, end = 0.0;

  auto flush = [&] {
    if (current.tokens.empty()) return;
    sentences.push_back({apply_tags(current), start, end});
    current.tokens.clear();
    current.tags.clear();
  };

  for (size_t i = 0; i < word_spans.size(); ++i) {
    if (current.tokens.empty()) {
      start = word_spans[i].start_s;
      end = word_spans[i].end_s;
    } else {
      start = std::min(start, word_spans[i].start_s);
      end = std::max(end, word_spans[i].end_s);
    }
    current.tokens.push_back(word_spans[i].word_text);
    current.tags.push_back(tags[i]);
    bool sentence_final = tags[i] == PuncTag::kPeriod ||
                          tags[i] == PuncTag::kQuestion ||
                          tags[i] == PuncTag::kExclamation;
    if (sentence_final) flush();
  }
  flush();  // trailing words without a final mark form the last sentence
  return sentences;
}

TranscriptionResult transcribe(const AudioBuffer& audio,
                               const PipelineComponents& components,
                               const PipelineConfig& cfg) {
  if (components.vad == nullptr)
    throw InvalidArgumentError("pipeline: voice detector is required");
  if (components.transcriber == nullptr)
    throw InvalidArgumentError("pipeline: transcriber is required");

  TranscriptionResult result;
  result.audio_duration_s = audio.duration_seconds();
  result.sample_rate = audio.sample_rate;

  PosteriorTrack track = components.vad->posteriors(audio);
  PosteriorTrack smoothed = smooth(track, cfg.vad_post.smooth_window_frames);
  auto decisions = binarize(smoothed, cfg.vad_post.threshold, 0);
  auto fsm_segments =
      segments_from_decisions(decisions, cfg.vad_post, track.frame_shift_s);
  result.vad_segments = refine_segments(fsm_segments, cfg.vad_post, smoothed,
                                        result.audio_duration_s, 0);

  const bool want_timestamps = components.transcriber->supports_timestamps();
  std::vector<WordSpan> all_words;
  std::vector<PuncTag> all_word_tags;
  bool sentences_available = want_timestamps && components.tagger != nullptr &&
                             !result.vad_segments.empty();

  for (const auto& seg : result.vad_segments) {
    AudioBuffer piece = crop_audio(audio, seg.start_s, seg.end_s);

    SegmentResult sr;
    sr.start_s = seg.start_s;
    sr.end_s = seg.end_s;

    if (components.lid != nullptr) {
      try {
        LidResult lid = components.lid->identify(piece);
        sr.language = lid.language;
        if (lid.dialect) sr.dialect = lid.dialect;
        sr.lid_confidence = lid.confidence;
      } catch (const Error& e) {
        throw ContractViolation(segment_context(seg) + "lid: " + e.what());
      }
    }

    TranscriberOutput out;
    try {
      out = components.transcriber->transcribe(piece);
    } catch (const Error& e) {
      throw ContractViolation(segment_context(seg) + "transcriber: " + e.what());
    }
    if (out.posteriors.size() != out.tokens.size())
      throw ContractViolation(segment_context(seg) + "transcriber returned " +
                              std::to_string(out.posteriors.size()) +
                              " posteriors for " +
                              std::to_string(out.tokens.size()) + " tokens");

    Hypothesis hyp;
    hyp.posteriors = out.posteriors;
    sr.asr_confidence = geometric_confidence(hyp, cfg.confidence).value;

    // Detokenize to word units; punctuation tags attach to words, which
    // keeps the tagging contract independent of the recognizer's subwords.
    std::vector<WordSpan> words;
    std::vector<std::string> word_texts;
    bool have_spans = want_timestamps && out.spans.has_value();
    if (have_spans) {
      if (out.spans->size() != out.tokens.size())
        throw ContractViolation(segment_context(seg) +
                                "transcriber spans do not cover every token");
      double seg_len = seg.end_s - seg.start_s;
      std::vector<TokenSpan> shifted = *out.spans;
      for (auto& span : shifted) {
        if (span.start_s < -1e-9 || span.end_s > seg_len + 1e-6 ||
            span.end_s <= span.start_s)
          throw ContractViolation(segment_context(seg) +
                                  "transcriber span outside the segment");
        span.start_s += seg.start_s;
        span.end_s += seg.start_s;
      }
      words = merge_words(shifted);
      for (const auto& w : words) word_texts.push_back(w.word_text);
    } else {
      word_texts = merge_word_texts(out.tokens);
    }

    std::vector<PuncTag> tags(word_texts.size(), PuncTag::kNone);
    if (components.tagger != nullptr && !word_texts.empty()) {
      try {
        tags = tag(*components.tagger, word_texts);
      } catch (const Error& e) {
        throw ContractViolation(segment_context(seg) + "tagger: " + e.what());
      }
    }
    sr.text = word_texts.empty()
                  ? ""
                  : apply_tags({word_texts, tags, cfg.punc_style});

    if (have_spans) {
      sr.word_spans = words;
      all_words.insert(all_words.end(), words.begin(), words.end());
      all_word_tags.insert(all_word_tags.end(), tags.begin(), tags.end());
    } else if (want_timestamps) {
      sentences_available = false;  // a segment without spans breaks sentences
    }

    result.text = join_texts(result.text, sr.text);
    result.segments.push_back(std::move(sr));
  }

  if (sentences_available)
    result.sentences =
        sentence_timestamps(all_words, all_word_tags, cfg.punc_style);
  return result;
}

namespace {

double fix6(double v) { return round_half_up(v, 6); }

}  // namespace

std::string result_to_json(const TranscriptionResult& result, bool pretty) {
  nlohmann::ordered_json j;
  j["version"] = 1;
  j["audio"] = {{"duration_s", fix6(result.audio_duration_s)},
                {"sample_rate", result.sample_rate}};
  j["text"] = result.text;

  nlohmann::ordered_json segments = nlohmann::ordered_json::array();
  for (const auto& s : result.segments) {
    nlohmann::ordered_json seg;
    seg["start"] = fix6(s.start_s);
    seg["end"] = fix6(s.end_s);
    seg["text"] = s.text;
    seg["asr_confidence"] = fix6(s.asr_confidence);
    if (s.language) seg["language"] = *s.language;
    if (s.dialect) seg["dialect"] = *s.dialect;
    if (s.lid_confidence) seg["lid_confidence"] = fix6(*s.lid_confidence);
    if (s.word_spans) {
      nlohmann::ordered_json words = nlohmann::ordered_json::array();
      for (const auto& w : *s.word_spans)
        words.push_back({{"w", w.word_text},
                         {"start", fix6(w.start_s)},
                         {"end", fix6(w.end_s)}});
      seg["words"] = words;
    }
    segments.push_back(seg);
  }
  j["segments"] = segments;

  nlohmann::ordered_json vad = nlohmann::ordered_json::array();
  for (const auto& s : result.vad_segments)
    vad.push_back({{"start", fix6(s.start_s)}, {"end", fix6(s.end_s)}});
  j["vad"] = vad;

  if (result.sentences) {
    nlohmann::ordered_json sentences = nlohmann::ordered_json::array();
    for (const auto& s : *result.sentences)
      sentences.push_back({{"text", s.text},
                           {"start", fix6(s.start_s)},
                           {"end", fix6(s.end_s)}});
    j["sentences"] = sentences;
  }
  return pretty ? j.dump(2) : j.dump();
}

}  // namespace speechpipe
