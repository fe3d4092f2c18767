#pragma once

#include "speechpipe/audio.h"
#include "speechpipe/types.h"

namespace speechpipe {

enum class WindowFunction { kHamming, kPovey };

struct FbankConfig {
  int num_mels = 80;
  double window_ms = 25.0;
  double shift_ms = 10.0;
  double low_freq_hz = 20.0;
  double high_freq_hz = 7600.0;
  double preemphasis = 0.97;
  WindowFunction window_function = WindowFunction::kHamming;
  double log_floor = 1e-10;

  void validate(int sample_rate) const;
};

// T x D log-mel energies on a drop-tail frame grid:
//   T = 1 + floor((N - W) / S)   (no padding; trailing samples dropped)
struct FeatureMatrix {
  MatrixF frames;
  double frame_shift_s = 0.010;
  double frame_len_s = 0.025;

  Eigen::Index num_frames() const { return frames.rows(); }
  Eigen::Index dim() const { return frames.cols(); }
};

// Frame count for a signal of n samples (window w, shift s, all in samples).
// Returns 0 when the signal is shorter than one window.
int64_t frame_count(int64_t n, int64_t w, int64_t s);

// Log-mel filterbank features. Requires mono 16 kHz input; anything else is
// rejected so that feature extraction stays bit-reproducible (resample
// explicitly with resample_linear if needed).
FeatureMatrix compute_fbank(const AudioBuffer& audio,
                            const FbankConfig& cfg = {});

// The mel filterbank as an (num_mels x num_fft_bins) weight matrix, exposed
// for tests and inspection. num_fft_bins = nfft/2 + 1.
MatrixD mel_filterbank(const FbankConfig& cfg, int sample_rate, int nfft);

double hz_to_mel(double hz);
double mel_to_hz(double mel);

}  // namespace speechpipe
