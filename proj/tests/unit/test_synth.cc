#include "doctest.h"
#include "speechpipe/synth.h"

using namespace speechpipe;

TEST_CASE("synthetic corpus is bit-identical for the same seed") {
  SynthSpec spec;
  spec.num_utterances = 3;
  spec.utterance_seconds = 5.0;
  SynthCorpus a = generate_synthetic_corpus(2024, spec);
  SynthCorpus b = generate_synthetic_corpus(2024, spec);
  REQUIRE(a.utterances.size() == b.utterances.size());
  for (size_t i = 0; i < a.utterances.size(); ++i) {
    CHECK(a.utterances[i].audio.samples == b.utterances[i].audio.samples);
    REQUIRE(a.utterances[i].regions.size() == b.utterances[i].regions.size());
  }

  SynthCorpus c = generate_synthetic_corpus(2025, spec);
  CHECK(a.utterances[0].audio.samples != c.utterances[0].audio.samples);
}

TEST_CASE("label mapping: singing is voice, music is not") {
  SynthSpec spec;
  spec.num_utterances = 12;
  spec.utterance_seconds = 6.0;
  SynthCorpus corpus = generate_synthetic_corpus(7, spec);

  const double shift = 0.010, len = 0.025;
  bool saw_singing = false, saw_music = false;
  for (const auto& utt : corpus.utterances) {
    int64_t frames = frame_count(
        static_cast<int64_t>(utt.audio.samples.size()), 400, 160);
    MatrixF mvad = mvad_frame_labels(utt, frames, shift, len);
    MatrixF vad = vad_frame_labels(utt, frames, shift, len);

    for (const auto& region : utt.regions) {
      // Probe a frame whose center is well inside the region.
      double mid = (region.start_s + region.end_s) / 2.0;
      int64_t t = static_cast<int64_t>((mid - len / 2.0) / shift);
      if (t < 0 || t >= frames) continue;
      switch (region.kind) {
        case RegionKind::kSinging:
          saw_singing = true;
          CHECK(mvad(t, 1) == 1.0f);
          CHECK(vad(t, 0) == 1.0f);  // singing counts as voice
          break;
        case RegionKind::kMusic:
          saw_music = true;
          CHECK(mvad(t, 2) == 1.0f);
          CHECK(mvad(t, 0) == 0.0f);
          CHECK(vad(t, 0) == 0.0f);  // music is non-voice
          break;
        case RegionKind::kSilence:
        case RegionKind::kNoise:
          CHECK(vad(t, 0) == 0.0f);
          break;
        case RegionKind::kSpeech:
          CHECK(mvad(t, 0) == 1.0f);
          CHECK(vad(t, 0) == 1.0f);
          break;
      }
    }
  }
  CHECK(saw_singing);
  CHECK(saw_music);
}

TEST_CASE("corpus_to_dataset aligns labels with feature frames") {
  SynthSpec spec;
  spec.num_utterances = 2;
  spec.utterance_seconds = 3.0;
  SynthCorpus corpus = generate_synthetic_corpus(99, spec);
  CmvnStats stats;
  auto vad_data = corpus_to_dataset(corpus, false, FbankConfig{}, &stats);
  auto mvad_data = corpus_to_dataset(corpus, true, FbankConfig{});

  CHECK(vad_data.size() == 2);
  for (const auto& utt : vad_data) {
    CHECK(utt.labels.rows() == utt.features.num_frames());
    CHECK(utt.labels.cols() == 1);
  }
  for (const auto& utt : mvad_data) CHECK(utt.labels.cols() == 3);
  CHECK(stats.frame_count > 0);
}
