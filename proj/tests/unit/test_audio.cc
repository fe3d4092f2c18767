#include <cstdio>

#include "doctest.h"
#include "helpers.h"
#include "speechpipe/audio.h"

using namespace speechpipe;

TEST_CASE("wav round trip preserves samples and rate") {
  AudioBuffer audio = testutil::sine_audio(440.0, 0.25);
  std::string path = "wav_roundtrip_test.wav";
  write_wav(audio, path);
  AudioBuffer loaded = read_wav(path);
  CHECK(loaded.sample_rate == 16000);
  CHECK(loaded.channel_count == 1);
  CHECK(loaded.samples == audio.samples);
  CHECK(loaded.duration_seconds() == doctest::Approx(0.25));
  std::remove(path.c_str());
}

TEST_CASE("wav reader rejects garbage") {
  std::string path = "wav_bad_test.wav";
  {
    FILE* f = fopen(path.c_str(), "wb");
    fwrite("not a wav file at all", 1, 21, f);
    fclose(f);
  }
  CHECK_THROWS_AS(read_wav(path), FormatError);
  std::remove(path.c_str());
  CHECK_THROWS_AS(read_wav("does_not_exist.wav"), FormatError);
}

TEST_CASE("linear resampling halves the sample count from 32k to 16k") {
  AudioBuffer audio = testutil::sine_audio(440.0, 0.5, 16000.0, 32000);
  AudioBuffer out = resample_linear(audio, 16000);
  CHECK(out.sample_rate == 16000);
  CHECK(std::abs(static_cast<long>(out.samples.size()) - 8000) <= 1);
  // A 440 Hz tone is preserved: zero crossings in the right ballpark.
  int crossings = 0;
  for (size_t i = 1; i < out.samples.size(); ++i)
    if ((out.samples[i - 1] < 0) != (out.samples[i] < 0)) ++crossings;
  CHECK(crossings > 400);
  CHECK(crossings < 480);
}

TEST_CASE("crop_audio extracts the half-open window") {
  AudioBuffer audio;
  audio.samples.resize(16000);
  for (int i = 0; i < 16000; ++i) audio.samples[i] = static_cast<int16_t>(i % 128);
  AudioBuffer cropped = crop_audio(audio, 0.25, 0.5);
  CHECK(cropped.samples.size() == 4000);
  CHECK(cropped.samples[0] == audio.samples[4000]);
  CHECK(cropped.samples.back() == audio.samples[7999]);
}
