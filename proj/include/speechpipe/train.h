#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <vector>

#include "speechpipe/dfsmn.h"

namespace speechpipe {

// One training example: features plus aligned frame labels in {0,1}^{T x K}.
struct LabeledUtterance {
  FeatureMatrix features;
  MatrixF labels;
};

struct TrainConfig {
  DfsmnConfig model;
  uint64_t seed = 1;
  int epochs = 10;
  double learning_rate = 1e-3;
  int batch_utterances = 4;
  double holdout_ratio = 0.2;
  int patience = 3;              // epochs without held-out F1 improvement
  double eval_threshold = 0.5;
};

struct TrainReport {
  double best_f1 = 0.0;
  int best_epoch = -1;
  std::vector<double> epoch_loss;
  std::vector<double> epoch_f1;
};

// Per-channel-independent binary cross-entropy with sigmoid outputs,
// averaged over frames and channels. Computed from logits for stability.
template <typename S>
double bce_loss(const MatrixT<S>& logits, const MatrixT<S>& labels);

// Mean BCE over the batch and its gradient with respect to every parameter.
// The gradient is returned in a model-shaped container. Dropout masks, when
// enabled, come from `gen` and are applied after each ReLU.
template <typename S>
double bce_gradients(const DfsmnModelT<S>& model,
                     std::span<const MatrixT<S>> inputs,
                     std::span<const MatrixT<S>> labels,
                     DfsmnModelT<S>& grad, double dropout,
                     std::mt19937_64* gen);

// Pooled frame-level F1 at `threshold` over all utterances and channels.
double frame_f1(const DfsmnModel& model,
                std::span<const LabeledUtterance> data, double threshold);

// Adam training with a deterministic shuffle; returns the checkpoint with
// the best held-out frame F1.
DfsmnModel train_frame_classifier(std::span<const LabeledUtterance> dataset,
                                  const TrainConfig& cfg,
                                  TrainReport* report = nullptr);

}  // namespace speechpipe
