#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "speechpipe/fbank.h"
#include "speechpipe/types.h"

namespace speechpipe {

struct DfsmnConfig {
  int num_blocks = 8;
  int hidden_size = 256;
  int proj_size = 128;
  int lookback_order = 20;
  int lookahead_order = 20;   // 0 => causal / streaming-capable
  int stride = 1;             // tap dilation
  double dropout = 0.05;      // training only; inference never drops
  int num_outputs = 1;        // 1 = VAD, 3 = mVAD
  int input_dim = 80;

  bool causal() const { return lookahead_order == 0; }
  int tap_len() const { return lookback_order + lookahead_order + 1; }
  void validate() const;
  bool operator==(const DfsmnConfig&) const = default;
};

template <typename S>
struct AffineT {
  MatrixT<S> weight;  // out x in;  y = x * weight^T + bias
  VectorT<S> bias;
};

// One DFSMN block. The memory applies per-channel FIR taps over the
// projected sequence: tap column j acts at time offset (j - lookahead)*stride,
// i.e. columns run future taps first, then the center tap, then past taps.
// Out-of-range context is zero, matching a zero-initialized stream cache.
template <typename S>
struct DfsmnBlockT {
  AffineT<S> in_proj;   // hidden -> proj
  MatrixT<S> taps;      // proj x tap_len
  AffineT<S> out_proj;  // proj -> hidden, ReLU after
};

template <typename S>
struct DfsmnModelT {
  DfsmnConfig config;
  AffineT<S> input_layer;  // input_dim -> hidden, ReLU after
  std::vector<DfsmnBlockT<S>> blocks;
  AffineT<S> final_ff;     // hidden -> hidden, ReLU after
  AffineT<S> output_head;  // hidden -> num_outputs (logits)
  uint64_t instance_id = 0;  // identifies the owner of a StreamState

  template <typename S2>
  DfsmnModelT<S2> cast() const;
};

using DfsmnModel = DfsmnModelT<float>;

// Per-frame event posteriors in [0,1]. Stored double so post-processing
// (smoothing, thresholding, split search) is exact; models fill it from
// their float outputs.
struct PosteriorTrack {
  MatrixD values;  // T x K
  double frame_shift_s = 0.010;
  std::vector<std::string> channel_names;

  Eigen::Index num_frames() const { return values.rows(); }
  Eigen::Index num_channels() const { return values.cols(); }
};

inline std::vector<std::string> vad_channel_names() { return {"voice"}; }
inline std::vector<std::string> mvad_channel_names() {
  return {"speech", "singing", "music"};
}

// Zero-weight model with the given config (weights trained or loaded later).
template <typename S>
DfsmnModelT<S> make_dfsmn(const DfsmnConfig& cfg);
// Seeded small-uniform initialization for training.
DfsmnModel init_dfsmn(const DfsmnConfig& cfg, uint64_t seed);

int64_t count_parameters(const DfsmnModel& model);

// Whole-utterance forward. Boundary frames see zero-padding where taps reach
// outside the sequence.
template <typename S>
MatrixT<S> dfsmn_logits(const DfsmnModelT<S>& model, const MatrixT<S>& input);
PosteriorTrack forward_full(const DfsmnModel& model, const FeatureMatrix& feats);

// Streaming inference. A state is bound to the model that created it and is
// single-owner; feeding it to another model throws.
struct StreamState {
  std::vector<MatrixF> caches;  // per block: (lookback*stride) x proj
  int64_t frames_consumed = 0;
  uint64_t model_id = 0;
};

StreamState init_stream(const DfsmnModel& model);  // requires causal model
PosteriorTrack forward_streaming(const DfsmnModel& model, StreamState& state,
                                 const FeatureMatrix& chunk);

// Versioned weight file: magic/version/header-length, JSON header (config +
// tensor manifest), then float32 little-endian tensor payload.
void save_weights(const DfsmnModel& model, const std::string& path);
DfsmnModel load_weights(const std::string& path);

template <typename S>
S sigmoid(S z) {
  if (z >= S(0)) return S(1) / (S(1) + std::exp(-z));
  S e = std::exp(z);
  return e / (S(1) + e);
}

}  // namespace speechpipe
