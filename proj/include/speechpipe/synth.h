#pragma once

#include <cstdint>
#include <vector>

#include "speechpipe/audio.h"
#include "speechpipe/cmvn.h"
#include "speechpipe/train.h"

namespace speechpipe {

// Deterministic desk-scale stand-in for a human-annotated event corpus:
// utterances interleave silence, white noise, harmonic "speech" bursts,
// vibrato "singing", and chord-like "music" regions, with exact frame labels.
struct SynthSpec {
  int num_utterances = 60;
  double utterance_seconds = 30.0;
  double min_region_s = 0.5;
  double max_region_s = 2.0;
  int sample_rate = 16000;
};

enum class RegionKind { kSilence, kNoise, kSpeech, kSinging, kMusic };

struct SynthRegion {
  RegionKind kind;
  double start_s;
  double end_s;
};

struct SynthUtterance {
  AudioBuffer audio;
  std::vector<SynthRegion> regions;
};

struct SynthCorpus {
  std::vector<SynthUtterance> utterances;
  SynthSpec spec;
};

SynthCorpus generate_synthetic_corpus(uint64_t seed, const SynthSpec& spec = {});

// Frame labels on the drop-tail grid (frame center membership):
//   multi-label: columns (speech, singing, music)
//   binary VAD:  one column, voice = speech OR singing
MatrixF mvad_frame_labels(const SynthUtterance& utt, int64_t num_frames,
                          double frame_shift_s, double frame_len_s);
MatrixF vad_frame_labels(const SynthUtterance& utt, int64_t num_frames,
                         double frame_shift_s, double frame_len_s);

// Features + labels for training. CMVN is estimated over the corpus and
// applied; the stats are returned through `stats_out` when non-null.
std::vector<LabeledUtterance> corpus_to_dataset(const SynthCorpus& corpus,
                                                bool multi_label,
                                                const FbankConfig& fbank_cfg,
                                                CmvnStats* stats_out = nullptr);

}  // namespace speechpipe
