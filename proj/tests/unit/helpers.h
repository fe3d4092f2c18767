#pragma once

// Shared generators for the unit and property tests. All randomness is
// seeded mt19937_64 so failures reproduce.

#include <cmath>
#include <random>
#include <vector>

#include "speechpipe/audio.h"
#include "speechpipe/dfsmn.h"

namespace testutil {

inline double uniform(std::mt19937_64& gen, double lo = 0.0, double hi = 1.0) {
  return lo + (hi - lo) * std::ldexp(static_cast<double>(gen() >> 11), -53);
}

inline int uniform_int(std::mt19937_64& gen, int lo, int hi) {
  return lo + static_cast<int>(gen() % static_cast<uint64_t>(hi - lo + 1));
}

inline speechpipe::MatrixF random_matrix(std::mt19937_64& gen, int rows,
                                         int cols, double lo = -1.0,
                                         double hi = 1.0) {
  speechpipe::MatrixF m(rows, cols);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j)
      m(i, j) = static_cast<float>(uniform(gen, lo, hi));
  return m;
}

inline speechpipe::AudioBuffer sine_audio(double freq_hz, double seconds,
                                          double amplitude = 16000.0,
                                          int sample_rate = 16000) {
  speechpipe::AudioBuffer audio;
  audio.sample_rate = sample_rate;
  int n = static_cast<int>(std::lround(seconds * sample_rate));
  audio.samples.resize(n);
  for (int i = 0; i < n; ++i) {
    double v = amplitude * std::sin(2.0 * M_PI * freq_hz * i / sample_rate);
    audio.samples[i] = static_cast<int16_t>(std::lround(v));
  }
  return audio;
}

inline speechpipe::PosteriorTrack random_track(std::mt19937_64& gen, int frames,
                                               int channels = 1,
                                               double shift = 0.010) {
  speechpipe::PosteriorTrack track;
  track.frame_shift_s = shift;
  track.values.resize(frames, channels);
  for (int t = 0; t < frames; ++t)
    for (int k = 0; k < channels; ++k) track.values(t, k) = uniform(gen);
  track.channel_names =
      channels == 3 ? speechpipe::mvad_channel_names()
                    : std::vector<std::string>{"voice"};
  return track;
}

// Blocky track: runs of high/low posterior, more like real VAD output.
inline speechpipe::PosteriorTrack blocky_track(std::mt19937_64& gen, int frames,
                                               double shift = 0.010) {
  speechpipe::PosteriorTrack track;
  track.frame_shift_s = shift;
  track.values.resize(frames, 1);
  track.channel_names = {"voice"};
  int t = 0;
  while (t < frames) {
    int run = uniform_int(gen, 1, 40);
    double level = uniform(gen) < 0.5 ? uniform(gen, 0.0, 0.45)
                                      : uniform(gen, 0.55, 1.0);
    for (int i = 0; i < run && t < frames; ++i, ++t) {
      track.values(t, 0) = level + uniform(gen, -0.05, 0.05);
      track.values(t, 0) = std::min(1.0, std::max(0.0, track.values(t, 0)));
    }
  }
  return track;
}

}  // namespace testutil
