#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "speechpipe/types.h"

namespace speechpipe {

// Mono 16-bit PCM audio. Multi-channel WAV input is downmixed on load so a
// buffer in flight always has channel_count == 1.
struct AudioBuffer {
  std::vector<int16_t> samples;
  int sample_rate = 16000;
  int channel_count = 1;

  double duration_seconds() const {
    return sample_rate > 0 ? static_cast<double>(samples.size()) / sample_rate
                           : 0.0;
  }
};

// RIFF/WAVE reader, PCM 16-bit only. Unknown chunks are skipped; stereo and
// multi-channel data is averaged down to mono.
AudioBuffer read_wav(const std::string& path);
void write_wav(const AudioBuffer& audio, const std::string& path);

// Linear-interpolation resampler. Only invoked explicitly (CLI --resample);
// the feature front-end rejects non-16k input instead of converting silently.
AudioBuffer resample_linear(const AudioBuffer& audio, int target_rate);

// Extracts [start_s, end_s) as a new buffer. Bounds are clamped to the audio.
AudioBuffer crop_audio(const AudioBuffer& audio, double start_s, double end_s);

}  // namespace speechpipe
