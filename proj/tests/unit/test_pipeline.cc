#include <fstream>

#include "doctest.h"
#include "helpers.h"
#include "speechpipe/mock_components.h"
#include "speechpipe/pipeline.h"

using namespace speechpipe;

namespace {

AudioBuffer silent_audio(double seconds) {
  AudioBuffer audio;
  audio.samples.assign(static_cast<size_t>(seconds * 16000), 0);
  return audio;
}

PipelineConfig quick_cfg() {
  PipelineConfig cfg;
  cfg.vad_post.smooth_window_frames = 1;
  cfg.vad_post.min_voice_ms = 100;
  cfg.vad_post.min_silence_ms = 200;
  cfg.vad_post.merge_gap_ms = 0;
  cfg.vad_post.pad_ms = 0;
  return cfg;
}

// The mock stack used by the golden test: two voice windows, table LID,
// scripted transcriber with spans, rule tagger.
struct MockStack {
  WindowVoiceDetector vad{{{1.0, 2.0}, {3.0, 4.5}}};
  ScriptedTranscriber transcriber{
      {{{"\xE4\xBD\xA0", "\xE5\xA5\xBD"},
        {0.9, 0.8},
        std::vector<std::pair<double, double>>{{0.10, 0.30}, {0.30, 0.55}}},
       {{"\xE2\x96\x81he", "llo", "\xE2\x96\x81world"},
        {0.95, 0.85, 0.75},
        std::vector<std::pair<double, double>>{
            {0.05, 0.40}, {0.40, 0.70}, {0.80, 1.30}}}},
      /*timestamps=*/true};
  ScriptedLidIdentifier lid{{{"zh", "yue", 0.85}, {"en", std::nullopt, 0.95}}};
  FinalPeriodTagger tagger;

  PipelineComponents components() {
    return {&vad, &transcriber, &lid, &tagger};
  }
};

}  // namespace

TEST_CASE("pipeline: silence-only audio produces an empty transcript") {
  WindowVoiceDetector vad({});  // no voice anywhere
  ScriptedTranscriber transcriber({}, false);
  PipelineComponents components{&vad, &transcriber, nullptr, nullptr};
  auto result = transcribe(silent_audio(3.0), components, quick_cfg());
  CHECK(result.text.empty());
  CHECK(result.segments.empty());
  CHECK(result.vad_segments.empty());
  CHECK(transcriber.calls() == 0);
  CHECK(!result.sentences.has_value());
}

TEST_CASE("pipeline: token spans shift to the original timeline") {
  WindowVoiceDetector vad({{1.0, 2.0}});
  ScriptedTranscriber transcriber(
      {{{"hi"}, {0.9},
        std::vector<std::pair<double, double>>{{0.1, 0.3}}}},
      true);
  PipelineComponents components{&vad, &transcriber, nullptr, nullptr};
  auto result = transcribe(silent_audio(3.0), components, quick_cfg());

  REQUIRE(result.segments.size() == 1);
  const auto& seg = result.segments[0];
  REQUIRE(seg.word_spans.has_value());
  REQUIRE(seg.word_spans->size() == 1);
  CHECK((*seg.word_spans)[0].start_s ==
        doctest::Approx(seg.start_s + 0.1));
  CHECK((*seg.word_spans)[0].end_s == doctest::Approx(seg.start_s + 0.3));
}

TEST_CASE("pipeline: every timestamp lies inside the audio") {
  MockStack stack;
  auto result = transcribe(silent_audio(5.0), stack.components(), quick_cfg());
  double dur = result.audio_duration_s;
  CHECK(dur == doctest::Approx(5.0));
  for (const auto& seg : result.vad_segments) {
    CHECK(seg.start_s >= 0.0);
    CHECK(seg.end_s <= dur + 1e-9);
  }
  for (const auto& seg : result.segments) {
    CHECK(seg.start_s >= 0.0);
    CHECK(seg.end_s <= dur + 1e-9);
    if (seg.word_spans)
      for (const auto& w : *seg.word_spans) {
        CHECK(w.start_s >= seg.start_s - 1e-9);
        CHECK(w.end_s <= seg.end_s + 1e-9);
      }
  }
  if (result.sentences)
    for (const auto& s : *result.sentences) {
      CHECK(s.start_s >= 0.0);
      CHECK(s.end_s <= dur + 1e-9);
    }
}

TEST_CASE("pipeline: segment count equals refined VAD output") {
  MockStack stack;
  auto result = transcribe(silent_audio(5.0), stack.components(), quick_cfg());
  CHECK(result.segments.size() == result.vad_segments.size());
  CHECK(result.segments.size() == 2);
}

TEST_CASE("pipeline: removing LID changes only the language fields") {
  MockStack with_lid;
  auto full = transcribe(silent_audio(5.0), with_lid.components(), quick_cfg());

  MockStack no_lid;
  PipelineComponents components = no_lid.components();
  components.lid = nullptr;
  auto bare = transcribe(silent_audio(5.0), components, quick_cfg());

  REQUIRE(full.segments.size() == bare.segments.size());
  CHECK(full.text == bare.text);
  CHECK(full.vad_segments == bare.vad_segments);
  for (size_t i = 0; i < full.segments.size(); ++i) {
    const auto& a = full.segments[i];
    const auto& b = bare.segments[i];
    CHECK(a.text == b.text);
    CHECK(a.asr_confidence == b.asr_confidence);
    CHECK(a.start_s == b.start_s);
    CHECK(b.language == std::nullopt);
    CHECK(b.dialect == std::nullopt);
    CHECK(b.lid_confidence == std::nullopt);
    CHECK(a.language.has_value());
  }
}

TEST_CASE("pipeline: deterministic byte-identical serialization") {
  MockStack a, b;
  auto ra = transcribe(silent_audio(5.0), a.components(), quick_cfg());
  auto rb = transcribe(silent_audio(5.0), b.components(), quick_cfg());
  CHECK(result_to_json(ra) == result_to_json(rb));
}

TEST_CASE("pipeline golden: mock stack output matches the committed file") {
  MockStack stack;
  auto result = transcribe(silent_audio(5.0), stack.components(), quick_cfg());
  std::string got = result_to_json(result, /*pretty=*/true);
  got += "\n";

  std::string path = std::string(TEST_DATA_DIR) + "/golden_pipeline.json";
  if (std::getenv("SPEECHPIPE_UPDATE_GOLDEN")) {
    std::ofstream out(path);
    out << got;
  }
  std::ifstream in(path);
  REQUIRE_MESSAGE(in.good(), "missing golden file: run with "
                             "SPEECHPIPE_UPDATE_GOLDEN=1 to create");
  std::string expected((std::istreambuf_iterator<char>(in)),
                       std::istreambuf_iterator<char>());
  CHECK(got == expected);
}

TEST_CASE("pipeline: contract violations carry segment context") {
  WindowVoiceDetector vad({{1.0, 2.0}});
  ScriptedTranscriber broken({{{"a", "b"}, {0.9}, std::nullopt}}, false);
  PipelineComponents components{&vad, &broken, nullptr, nullptr};
  CHECK_THROWS_WITH_AS(transcribe(silent_audio(3.0), components, quick_cfg()),
                       doctest::Contains("segment ["), ContractViolation);
}

TEST_CASE("pipeline requires vad and transcriber") {
  ScriptedTranscriber t({}, false);
  WindowVoiceDetector vad({});
  PipelineComponents no_vad{nullptr, &t, nullptr, nullptr};
  CHECK_THROWS_AS(transcribe(silent_audio(1.0), no_vad, quick_cfg()),
                  InvalidArgumentError);
  PipelineComponents no_asr{&vad, nullptr, nullptr, nullptr};
  CHECK_THROWS_AS(transcribe(silent_audio(1.0), no_asr, quick_cfg()),
                  InvalidArgumentError);
}

TEST_CASE("sentence_timestamps: splits after sentence-final tags") {
  std::vector<WordSpan> words = {{"one", 0.0, 0.2, {0}},
                                 {"two", 0.2, 0.5, {1}},
                                 {"three", 0.6, 0.9, {2}},
                                 {"four", 0.9, 1.4, {3}}};
  std::vector<PuncTag> tags = {PuncTag::kNone, PuncTag::kPeriod,
                               PuncTag::kNone, PuncTag::kPeriod};
  auto sentences =
      sentence_timestamps(words, tags, LanguageStyle::kEnglishHalfwidth);
  REQUIRE(sentences.size() == 2);
  CHECK(sentences[0].text == "one two.");
  CHECK(sentences[0].start_s == doctest::Approx(0.0));
  CHECK(sentences[0].end_s == doctest::Approx(0.5));
  CHECK(sentences[1].text == "three four.");
  CHECK(sentences[1].start_s == doctest::Approx(0.6));
  CHECK(sentences[1].end_s == doctest::Approx(1.4));
}

TEST_CASE("sentence_timestamps: no final tag means one sentence") {
  std::vector<WordSpan> words = {{"a", 0.0, 0.1, {0}}, {"b", 0.1, 0.2, {1}}};
  std::vector<PuncTag> tags = {PuncTag::kNone, PuncTag::kNone};
  auto sentences =
      sentence_timestamps(words, tags, LanguageStyle::kEnglishHalfwidth);
  REQUIRE(sentences.size() == 1);
  CHECK(sentences[0].end_s == doctest::Approx(0.2));
}

TEST_CASE("sentence_timestamps: commas never split sentences") {
  std::vector<WordSpan> words = {{"a", 0.0, 0.1, {0}},
                                 {"b", 0.1, 0.2, {1}},
                                 {"c", 0.2, 0.3, {2}}};
  std::vector<PuncTag> tags = {PuncTag::kComma, PuncTag::kComma,
                               PuncTag::kPeriod};
  auto sentences =
      sentence_timestamps(words, tags, LanguageStyle::kEnglishHalfwidth);
  REQUIRE(sentences.size() == 1);
  CHECK(sentences[0].text == "a, b, c.");

  std::vector<PuncTag> bad = {PuncTag::kNone};
  CHECK_THROWS_AS(
      sentence_timestamps(words, bad, LanguageStyle::kEnglishHalfwidth),
      DimensionError);
}

TEST_CASE("dfsmn-backed voice detector wires features, cmvn, and the model") {
  DfsmnConfig cfg;
  cfg.num_blocks = 1;
  cfg.hidden_size = 8;
  cfg.proj_size = 4;
  cfg.lookback_order = 2;
  cfg.lookahead_order = 2;
  cfg.input_dim = 80;
  DfsmnModel model = init_dfsmn(cfg, 3);

  CmvnStats stats;
  stats.mean = VectorD::Zero(80);
  stats.variance = VectorD::Ones(80);
  stats.frame_count = 1;

  DfsmnVoiceDetector detector(model, FbankConfig{}, stats);
  PosteriorTrack track = detector.posteriors(testutil::sine_audio(440.0, 1.0));
  CHECK(track.num_frames() == 98);
  CHECK((track.values.array() >= 0.0).all());
  CHECK((track.values.array() <= 1.0).all());
}
