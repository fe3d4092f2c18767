#include "speechpipe/train.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "dfsmn_ops.h"

namespace speechpipe {

namespace {

template <typename S>
struct BlockTrace {
  MatrixT<S> input;    // activation entering the block
  MatrixT<S> p_ext;    // padded projection
  MatrixT<S> mem_sum;  // post-residual memory output
  MatrixT<S> pre_out;  // out_proj pre-activation
  MatrixT<S> out_mask; // dropout mask on the block output (empty = none)
};

template <typename S>
struct ForwardTrace {
  MatrixT<S> input;
  MatrixT<S> pre_input;   // input layer pre-activation
  MatrixT<S> input_mask;
  std::vector<BlockTrace<S>> blocks;
  MatrixT<S> ff_input;
  MatrixT<S> pre_ff;
  MatrixT<S> ff_mask;
  MatrixT<S> ff_out;      // head input (post relu, post dropout)
  MatrixT<S> logits;
};

template <typename S>
MatrixT<S> dropout_mask(Eigen::Index rows, Eigen::Index cols, double rate,
                        std::mt19937_64* gen) {
  MatrixT<S> mask(rows, cols);
  const S keep_scale = S(1.0 / (1.0 - rate));
  for (Eigen::Index i = 0; i < rows; ++i)
    for (Eigen::Index j = 0; j < cols; ++j) {
      double u = std::ldexp(static_cast<double>((*gen)() >> 11), -53);
      mask(i, j) = u < rate ? S(0) : keep_scale;
    }
  return mask;
}

template <typename S>
ForwardTrace<S> forward_with_trace(const DfsmnModelT<S>& model,
                                   const MatrixT<S>& input, double dropout,
                                   std::mt19937_64* gen) {
  const DfsmnConfig& cfg = model.config;
  const int pad_past = cfg.lookback_order * cfg.stride;
  const int pad_future = cfg.lookahead_order * cfg.stride;
  const bool use_dropout = dropout > 0.0 && gen != nullptr;

  ForwardTrace<S> tr;
  tr.input = input;
  tr.pre_input = detail::affine_forward(input, model.input_layer);
  MatrixT<S> act = detail::relu<S>(tr.pre_input);
  if (use_dropout) {
    tr.input_mask = dropout_mask<S>(act.rows(), act.cols(), dropout, gen);
    act = act.cwiseProduct(tr.input_mask);
  }

  tr.blocks.resize(cfg.num_blocks);
  MatrixT<S> mem_prev;
  for (int b = 0; b < cfg.num_blocks; ++b) {
    const auto& block = model.blocks[b];
    auto& bt = tr.blocks[b];
    bt.input = act;
    MatrixT<S> p = detail::affine_forward(act, block.in_proj);
    bt.p_ext = detail::pad_projection(p, pad_past, pad_future);
    MatrixT<S> mem = detail::apply_memory(bt.p_ext, pad_past, input.rows(),
                                          block.taps, cfg.lookahead_order,
                                          cfg.stride);
    if (b > 0) mem += mem_prev;
    mem_prev = mem;
    bt.mem_sum = mem;
    bt.pre_out = detail::affine_forward(mem, block.out_proj);
    act = detail::relu<S>(bt.pre_out);
    if (use_dropout) {
      bt.out_mask = dropout_mask<S>(act.rows(), act.cols(), dropout, gen);
      act = act.cwiseProduct(bt.out_mask);
    }
  }

  tr.ff_input = act;
  tr.pre_ff = detail::affine_forward(act, model.final_ff);
  MatrixT<S> ff = detail::relu<S>(tr.pre_ff);
  if (use_dropout) {
    tr.ff_mask = dropout_mask<S>(ff.rows(), ff.cols(), dropout, gen);
    ff = ff.cwiseProduct(tr.ff_mask);
  }
  tr.ff_out = ff;
  tr.logits = detail::affine_forward(ff, model.output_head);
  return tr;
}

// Accumulates parameter gradients for one utterance given dL/dlogits.
template <typename S>
void backward(const DfsmnModelT<S>& model, const ForwardTrace<S>& tr,
              const MatrixT<S>& d_logits, DfsmnModelT<S>& grad) {
  const DfsmnConfig& cfg = model.config;
  const int pad_past = cfg.lookback_order * cfg.stride;

  grad.output_head.weight += d_logits.transpose() * tr.ff_out;
  grad.output_head.bias += d_logits.colwise().sum().transpose();
  MatrixT<S> d_ff = d_logits * model.output_head.weight;

  if (tr.ff_mask.size() > 0) d_ff = d_ff.cwiseProduct(tr.ff_mask);
  MatrixT<S> d_pre_ff =
      d_ff.cwiseProduct((tr.pre_ff.array() > S(0)).template cast<S>().matrix());
  grad.final_ff.weight += d_pre_ff.transpose() * tr.ff_input;
  grad.final_ff.bias += d_pre_ff.colwise().sum().transpose();
  MatrixT<S> d_act = d_pre_ff * model.final_ff.weight;

  MatrixT<S> carry;  // gradient flowing into the residual memory chain
  for (int b = cfg.num_blocks - 1; b >= 0; --b) {
    const auto& block = model.blocks[b];
    const auto& bt = tr.blocks[b];
    if (bt.out_mask.size() > 0) d_act = d_act.cwiseProduct(bt.out_mask);
    MatrixT<S> d_pre_out = d_act.cwiseProduct(
        (bt.pre_out.array() > S(0)).template cast<S>().matrix());
    grad.blocks[b].out_proj.weight += d_pre_out.transpose() * bt.mem_sum;
    grad.blocks[b].out_proj.bias += d_pre_out.colwise().sum().transpose();
    MatrixT<S> d_mem = d_pre_out * block.out_proj.weight;
    if (carry.size() > 0) d_mem += carry;
    if (b > 0) carry = d_mem;

    grad.blocks[b].taps += detail::memory_backward_taps(
        d_mem, bt.p_ext, pad_past, cfg.tap_len(), cfg.lookahead_order,
        cfg.stride);
    MatrixT<S> d_p_ext = detail::memory_backward_input(
        d_mem, bt.p_ext.rows(), pad_past, block.taps, cfg.lookahead_order,
        cfg.stride);
    MatrixT<S> d_p = d_p_ext.middleRows(pad_past, d_mem.rows());
    grad.blocks[b].in_proj.weight += d_p.transpose() * bt.input;
    grad.blocks[b].in_proj.bias += d_p.colwise().sum().transpose();
    d_act = d_p * block.in_proj.weight;
  }

  if (tr.input_mask.size() > 0) d_act = d_act.cwiseProduct(tr.input_mask);
  MatrixT<S> d_pre_input = d_act.cwiseProduct(
      (tr.pre_input.array() > S(0)).template cast<S>().matrix());
  grad.input_layer.weight += d_pre_input.transpose() * tr.input;
  grad.input_layer.bias += d_pre_input.colwise().sum().transpose();
}

template <typename S>
double bce_from_logits(const MatrixT<S>& logits, const MatrixT<S>& labels) {
  // max(z,0) - z*y + log1p(exp(-|z|)), averaged per frame-channel.
  double total = 0.0;
  for (Eigen::Index i = 0; i < logits.rows(); ++i)
    for (Eigen::Index j = 0; j < logits.cols(); ++j) {
      double z = logits(i, j), y = labels(i, j);
      total += std::max(z, 0.0) - z * y + std::log1p(std::exp(-std::abs(z)));
    }
  return total / static_cast<double>(logits.size());
}

struct Confusion {
  int64_t tp = 0, fp = 0, fn = 0;
  double f1() const {
    double denom = 2.0 * tp + fp + fn;
    return denom > 0 ? 2.0 * tp / denom : 0.0;
  }
};

void update_adam(DfsmnModel& model, const DfsmnModel& grad, DfsmnModel& m,
                 DfsmnModel& v, float lr, float beta1, float beta2, float eps,
                 float bias_corr1, float bias_corr2) {
  detail::for_each_tensor_zip(
      model, grad, m, v, [&](auto& w, const auto& g, auto& mm, auto& vv) {
        mm.array() = beta1 * mm.array() + (1.0f - beta1) * g.array();
        vv.array() = beta2 * vv.array() + (1.0f - beta2) * g.array().square();
        w.array() -= lr * (mm.array() / bias_corr1) /
                     ((vv.array() / bias_corr2).sqrt() + eps);
      });
}

}  // namespace

template <typename S>
double bce_loss(const MatrixT<S>& logits, const MatrixT<S>& labels) {
  if (logits.rows() != labels.rows() || logits.cols() != labels.cols())
    throw DimensionError("bce_loss: logits/labels shape mismatch");
  return bce_from_logits(logits, labels);
}

template double bce_loss<float>(const MatrixT<float>&, const MatrixT<float>&);
template double bce_loss<double>(const MatrixT<double>&,
                                 const MatrixT<double>&);

template <typename S>
double bce_gradients(const DfsmnModelT<S>& model,
                     std::span<const MatrixT<S>> inputs,
                     std::span<const MatrixT<S>> labels,
                     DfsmnModelT<S>& grad, double dropout,
                     std::mt19937_64* gen) {
  if (inputs.size() != labels.size() || inputs.empty())
    throw InvalidArgumentError("bce_gradients: empty or mismatched batch");
  detail::for_each_tensor(grad, [](auto& t) { t.setZero(); });

  double loss = 0.0;
  const double inv_batch = 1.0 / static_cast<double>(inputs.size());
  for (size_t u = 0; u < inputs.size(); ++u) {
    if (inputs[u].rows() != labels[u].rows() ||
        labels[u].cols() != model.config.num_outputs)
      throw DimensionError("bce_gradients: label/frame shape mismatch");
    ForwardTrace<S> tr = forward_with_trace(model, inputs[u], dropout, gen);
    loss += bce_from_logits(tr.logits, labels[u]) * inv_batch;
    const double scale = inv_batch / static_cast<double>(tr.logits.size());
    MatrixT<S> d_logits =
        (tr.logits.unaryExpr([](S z) { return sigmoid(z); }) - labels[u]) *
        S(scale);
    backward(model, tr, d_logits, grad);
  }
  return loss;
}

template double bce_gradients<float>(const DfsmnModelT<float>&,
                                     std::span<const MatrixT<float>>,
                                     std::span<const MatrixT<float>>,
                                     DfsmnModelT<float>&, double,
                                     std::mt19937_64*);
template double bce_gradients<double>(const DfsmnModelT<double>&,
                                      std::span<const MatrixT<double>>,
                                      std::span<const MatrixT<double>>,
                                      DfsmnModelT<double>&, double,
                                      std::mt19937_64*);

double frame_f1(const DfsmnModel& model,
                std::span<const LabeledUtterance> data, double threshold) {
  Confusion c;
  for (const auto& utt : data) {
    PosteriorTrack track = forward_full(model, utt.features);
    for (Eigen::Index t = 0; t < track.values.rows(); ++t)
      for (Eigen::Index k = 0; k < track.values.cols(); ++k) {
        bool pred = track.values(t, k) >= threshold;
        bool ref = utt.labels(t, k) >= 0.5f;
        if (pred && ref) ++c.tp;
        else if (pred) ++c.fp;
        else if (ref) ++c.fn;
      }
  }
  return c.f1();
}

DfsmnModel train_frame_classifier(std::span<const LabeledUtterance> dataset,
                                  const TrainConfig& cfg, TrainReport* report) {
  if (dataset.empty())
    throw InvalidArgumentError("train_frame_classifier: empty dataset");
  for (const auto& utt : dataset) {
    if (utt.labels.rows() != utt.features.frames.rows())
      throw DimensionError(
          "train_frame_classifier: label/frame length mismatch (" +
          std::to_string(utt.labels.rows()) + " labels vs " +
          std::to_string(utt.features.frames.rows()) + " frames)");
    if (utt.labels.cols() != cfg.model.num_outputs)
      throw DimensionError(
          "train_frame_classifier: label channels != model outputs");
  }

  std::mt19937_64 gen(cfg.seed);
  std::vector<size_t> order(dataset.size());
  std::iota(order.begin(), order.end(), 0);
  std::shuffle(order.begin(), order.end(), gen);

  size_t holdout_n = dataset.size() > 1
      ? std::max<size_t>(1, static_cast<size_t>(
            std::llround(cfg.holdout_ratio * dataset.size())))
      : 0;
  holdout_n = std::min(holdout_n, dataset.size() - 1);
  std::vector<LabeledUtterance> holdout, train;
  for (size_t i = 0; i < order.size(); ++i)
    (i < holdout_n ? holdout : train).push_back(dataset[order[i]]);
  if (holdout.empty()) holdout = train;  // single-utterance degenerate case

  DfsmnModel model = init_dfsmn(cfg.model, cfg.seed ^ 0x9E3779B97F4A7C15ull);
  DfsmnModel grad = make_dfsmn<float>(cfg.model);
  DfsmnModel adam_m = make_dfsmn<float>(cfg.model);
  DfsmnModel adam_v = make_dfsmn<float>(cfg.model);

  const float beta1 = 0.9f, beta2 = 0.999f, eps = 1e-8f;
  int64_t step = 0;

  DfsmnModel best = model;
  double best_f1 = frame_f1(model, holdout, cfg.eval_threshold);
  int best_epoch = -1;
  int stale_epochs = 0;
  if (report) {
    report->best_f1 = best_f1;
    report->best_epoch = best_epoch;
  }

  std::vector<MatrixF> batch_inputs, batch_labels;
  for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
    std::vector<size_t> idx(train.size());
    std::iota(idx.begin(), idx.end(), 0);
    std::shuffle(idx.begin(), idx.end(), gen);

    double epoch_loss = 0.0;
    int batches = 0;
    for (size_t pos = 0; pos < idx.size();
         pos += static_cast<size_t>(cfg.batch_utterances)) {
      batch_inputs.clear();
      batch_labels.clear();
      for (size_t i = pos;
           i < std::min(idx.size(),
                        pos + static_cast<size_t>(cfg.batch_utterances));
           ++i) {
        batch_inputs.push_back(train[idx[i]].features.frames);
        batch_labels.push_back(train[idx[i]].labels);
      }
      epoch_loss += bce_gradients<float>(model, batch_inputs, batch_labels,
                                         grad, cfg.model.dropout, &gen);
      ++batches;
      ++step;

      const float bc1 = 1.0f - std::pow(beta1, static_cast<float>(step));
      const float bc2 = 1.0f - std::pow(beta2, static_cast<float>(step));
      update_adam(model, grad, adam_m, adam_v,
                  static_cast<float>(cfg.learning_rate), beta1, beta2, eps,
                  bc1, bc2);
    }

    double f1 = frame_f1(model, holdout, cfg.eval_threshold);
    if (report) {
      report->epoch_loss.push_back(batches > 0 ? epoch_loss / batches : 0.0);
      report->epoch_f1.push_back(f1);
    }
    // Ties go to the later checkpoint: equal F1 after more training is the
    // better model to return (loss keeps improving past F1 saturation).
    stale_epochs = f1 > best_f1 ? 0 : stale_epochs + 1;
    if (f1 >= best_f1) {
      best_f1 = f1;
      best = model;
      best_epoch = epoch;
    }
    if (stale_epochs > cfg.patience) break;
  }

  if (report) {
    report->best_f1 = best_f1;
    report->best_epoch = best_epoch;
  }
  return best;
}

}  // namespace speechpipe
