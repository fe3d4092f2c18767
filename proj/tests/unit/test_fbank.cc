#include <cmath>
#include <complex>

#include "doctest.h"
#include "helpers.h"
#include "speechpipe/fbank.h"

using namespace speechpipe;

namespace {

// Independent reference: pre-emphasis + window + direct O(N^2) DFT + mel
// triangles, all rebuilt from the definitions with plain loops.
std::vector<double> reference_frame(const std::vector<int16_t>& samples,
                                    size_t offset, const FbankConfig& cfg,
                                    int sample_rate) {
  const int w = static_cast<int>(cfg.window_ms * sample_rate / 1000.0);
  const int nfft = [&] {
    int p = 1;
    while (p < w) p <<= 1;
    return p;
  }();

  std::vector<double> x(nfft, 0.0);
  for (int j = w - 1; j >= 1; --j) {
    double win = 0.54 - 0.46 * std::cos(2.0 * M_PI * j / (w - 1));
    x[j] = (samples[offset + j] - cfg.preemphasis * samples[offset + j - 1]) * win;
  }
  x[0] = samples[offset] * (1.0 - cfg.preemphasis) * 0.08;  // window[0]

  const int bins = nfft / 2 + 1;
  std::vector<double> power(bins);
  for (int k = 0; k < bins; ++k) {
    std::complex<double> acc(0.0, 0.0);
    for (int n = 0; n < nfft; ++n) {
      double phase = -2.0 * M_PI * k * n / nfft;
      acc += x[n] * std::complex<double>(std::cos(phase), std::sin(phase));
    }
    power[k] = std::norm(acc);
  }

  auto mel = [](double hz) { return 2595.0 * std::log10(1.0 + hz / 700.0); };
  double mel_lo = mel(cfg.low_freq_hz), mel_hi = mel(cfg.high_freq_hz);
  double delta = (mel_hi - mel_lo) / (cfg.num_mels + 1);
  std::vector<double> out(cfg.num_mels);
  for (int m = 0; m < cfg.num_mels; ++m) {
    double left = mel_lo + m * delta, center = left + delta, right = center + delta;
    double energy = 0.0;
    for (int k = 0; k < bins; ++k) {
      double fm = mel(static_cast<double>(k) * sample_rate / nfft);
      if (fm > left && fm < right) {
        double weight = fm <= center ? (fm - left) / (center - left)
                                     : (right - fm) / (right - center);
        energy += weight * power[k];
      }
    }
    out[m] = std::log(energy + cfg.log_floor);
  }
  return out;
}

}  // namespace

TEST_CASE("fbank frame count: 1 second of 16 kHz audio yields 98 frames") {
  AudioBuffer audio;
  audio.samples.assign(16000, 100);
  FeatureMatrix feats = compute_fbank(audio);
  CHECK(feats.num_frames() == 98);
  CHECK(feats.dim() == 80);
  CHECK(frame_count(16000, 400, 160) == 98);
}

TEST_CASE("fbank frame count formula holds over random lengths") {
  std::mt19937_64 gen(11);
  for (int trial = 0; trial < 25; ++trial) {
    int n = testutil::uniform_int(gen, 400, 50000);
    AudioBuffer audio;
    audio.samples.assign(n, 1000);
    FeatureMatrix feats = compute_fbank(audio);
    CHECK(feats.num_frames() == 1 + (n - 400) / 160);
  }
}

TEST_CASE("fbank of silence is the constant log-floor vector") {
  AudioBuffer audio;
  audio.samples.assign(8000, 0);
  FeatureMatrix feats = compute_fbank(audio);
  const float expected = std::log(1e-10f);
  for (Eigen::Index t = 0; t < feats.num_frames(); ++t)
    for (Eigen::Index d = 0; d < feats.dim(); ++d)
      CHECK(feats.frames(t, d) == doctest::Approx(expected).epsilon(1e-6));
}

TEST_CASE("fbank matches a direct DFT + mel reference on a pure tone") {
  AudioBuffer audio = testutil::sine_audio(1000.0, 0.5, 32000.0);
  FeatureMatrix feats = compute_fbank(audio);

  // The peak mel bin is stable across frames.
  Eigen::Index peak0;
  feats.frames.row(0).maxCoeff(&peak0);
  for (Eigen::Index t = 1; t < feats.num_frames(); ++t) {
    Eigen::Index peak;
    feats.frames.row(t).maxCoeff(&peak);
    CHECK(peak == peak0);
  }

  // Rows match the independent reference.
  FbankConfig cfg;
  for (Eigen::Index t : {Eigen::Index{0}, Eigen::Index{7}, Eigen::Index{31}}) {
    auto ref = reference_frame(audio.samples, t * 160, cfg, audio.sample_rate);
    for (int m = 0; m < cfg.num_mels; ++m)
      CHECK(feats.frames(t, m) == doctest::Approx(ref[m]).epsilon(1e-4));
  }
}

TEST_CASE("fbank is deterministic") {
  AudioBuffer audio = testutil::sine_audio(440.0, 0.3);
  FeatureMatrix a = compute_fbank(audio);
  FeatureMatrix b = compute_fbank(audio);
  CHECK(a.frames == b.frames);
}

TEST_CASE("doubling the waveform shifts log energies by 2 log 2") {
  AudioBuffer audio = testutil::sine_audio(700.0, 0.2, 4000.0);
  AudioBuffer doubled = audio;
  for (auto& s : doubled.samples) s = static_cast<int16_t>(s * 2);

  FeatureMatrix a = compute_fbank(audio);
  FeatureMatrix b = compute_fbank(doubled);
  const double shift = 2.0 * std::log(2.0);
  for (Eigen::Index t = 0; t < a.num_frames(); ++t)
    for (Eigen::Index d = 0; d < a.dim(); ++d)
      CHECK(b.frames(t, d) - a.frames(t, d) ==
            doctest::Approx(shift).epsilon(1e-3));
}

TEST_CASE("fbank rejects bad input") {
  AudioBuffer too_short;
  too_short.samples.assign(399, 0);
  CHECK_THROWS_AS(compute_fbank(too_short), InvalidArgumentError);
  CHECK_THROWS_WITH_AS(compute_fbank(too_short),
                       doctest::Contains("too short"), InvalidArgumentError);

  AudioBuffer wrong_rate = testutil::sine_audio(440.0, 0.5, 8000.0, 8000);
  CHECK_THROWS_WITH_AS(compute_fbank(wrong_rate),
                       doctest::Contains("resample"), InvalidArgumentError);

  AudioBuffer stereo = testutil::sine_audio(440.0, 0.5);
  stereo.channel_count = 2;
  CHECK_THROWS_AS(compute_fbank(stereo), InvalidArgumentError);
}
