#include "speechpipe/fbank.h"

#include <unsupported/Eigen/FFT>

#include <cmath>
#include <complex>
#include <vector>

namespace speechpipe {

namespace {

constexpr int kCanonicalRate = 16000;

int next_pow2(int n) {
  int p = 1;
  while (p < n) p <<= 1;
  return p;
}

std::vector<double> make_window(WindowFunction fn, int w) {
  std::vector<double> win(w);
  const double two_pi = 2.0 * M_PI;
  for (int n = 0; n < w; ++n) {
    double phase = two_pi * n / (w - 1);
    switch (fn) {
      case WindowFunction::kHamming:
        win[n] = 0.54 - 0.46 * std::cos(phase);
        break;
      case WindowFunction::kPovey:
        win[n] = std::pow(0.5 - 0.5 * std::cos(phase), 0.85);
        break;
    }
  }
  return win;
}

}  // namespace

double hz_to_mel(double hz) { return 2595.0 * std::log10(1.0 + hz / 700.0); }

double mel_to_hz(double mel) {
  return 700.0 * (std::pow(10.0, mel / 2595.0) - 1.0);
}

void FbankConfig::validate(int sample_rate) const {
  if (num_mels < 1) throw InvalidArgumentError("num_mels must be >= 1");
  if (shift_ms <= 0 || shift_ms > window_ms)
    throw InvalidArgumentError("require 0 < shift_ms <= window_ms");
  if (!(low_freq_hz < high_freq_hz && high_freq_hz <= sample_rate / 2.0))
    throw InvalidArgumentError(
        "require low_freq_hz < high_freq_hz <= sample_rate/2");
  if (log_floor <= 0) throw InvalidArgumentError("log_floor must be > 0");
}

int64_t frame_count(int64_t n, int64_t w, int64_t s) {
  if (n < w) return 0;
  return 1 + (n - w) / s;
}

MatrixD mel_filterbank(const FbankConfig& cfg, int sample_rate, int nfft) {
  int num_bins = nfft / 2 + 1;
  MatrixD weights = MatrixD::Zero(cfg.num_mels, num_bins);
  double mel_lo = hz_to_mel(cfg.low_freq_hz);
  double mel_hi = hz_to_mel(cfg.high_freq_hz);
  double mel_delta = (mel_hi - mel_lo) / (cfg.num_mels + 1);
  double bin_width = static_cast<double>(sample_rate) / nfft;

  for (int m = 0; m < cfg.num_mels; ++m) {
    double left = mel_lo + m * mel_delta;
    double center = left + mel_delta;
    double right = center + mel_delta;
    for (int k = 0; k < num_bins; ++k) {
      double mel = hz_to_mel(k * bin_width);
      if (mel > left && mel < right) {
        weights(m, k) = mel <= center ? (mel - left) / (center - left)
                                      : (right - mel) / (right - center);
      }
    }
  }
  return weights;
}

FeatureMatrix compute_fbank(const AudioBuffer& audio, const FbankConfig& cfg) {
  if (audio.channel_count != 1)
    throw InvalidArgumentError("compute_fbank requires mono audio");
  if (audio.sample_rate != kCanonicalRate)
    throw InvalidArgumentError(
        "compute_fbank requires 16 kHz input (got " +
        std::to_string(audio.sample_rate) + " Hz); resample first");
  cfg.validate(audio.sample_rate);

  const int w = static_cast<int>(std::lround(cfg.window_ms * audio.sample_rate / 1000.0));
  const int s = static_cast<int>(std::lround(cfg.shift_ms * audio.sample_rate / 1000.0));
  const int64_t n = static_cast<int64_t>(audio.samples.size());
  const int64_t t_total = frame_count(n, w, s);
  if (t_total == 0)
    throw InvalidArgumentError(
        "audio too short for one analysis window (need " + std::to_string(w) +
        " samples, got " + std::to_string(n) + ")");

  const int nfft = next_pow2(w);
  const int num_bins = nfft / 2 + 1;
  const std::vector<double> window = make_window(cfg.window_function, w);
  const MatrixD mel = mel_filterbank(cfg, audio.sample_rate, nfft);

  FeatureMatrix out;
  out.frame_shift_s = cfg.shift_ms / 1000.0;
  out.frame_len_s = cfg.window_ms / 1000.0;
  out.frames.resize(t_total, cfg.num_mels);

  Eigen::FFT<double> fft;
  std::vector<double> buf(nfft, 0.0);
  std::vector<std::complex<double>> spectrum(nfft);
  VectorD power(num_bins);

  for (int64_t t = 0; t < t_total; ++t) {
    const int16_t* frame = audio.samples.data() + t * s;
    // Pre-emphasis then window, right to left so x[j-1] is still raw.
    buf.assign(nfft, 0.0);
    for (int j = w - 1; j >= 1; --j)
      buf[j] = (frame[j] - cfg.preemphasis * frame[j - 1]) * window[j];
    buf[0] = frame[0] * (1.0 - cfg.preemphasis) * window[0];

    fft.fwd(spectrum, buf);
    for (int k = 0; k < num_bins; ++k) power[k] = std::norm(spectrum[k]);

    VectorD energies = mel * power;
    for (int m = 0; m < cfg.num_mels; ++m)
      out.frames(t, m) = static_cast<float>(std::log(energies[m] + cfg.log_floor));
  }
  return out;
}

}  // namespace speechpipe
