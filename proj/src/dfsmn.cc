#include "speechpipe/dfsmn.h"

#include <atomic>
#include <cmath>
#include <random>

#include "dfsmn_ops.h"

namespace speechpipe {

namespace {

std::atomic<uint64_t> g_next_instance_id{1};

uint64_t next_instance_id() { return g_next_instance_id.fetch_add(1); }

double unit_uniform(std::mt19937_64& gen) {
  // 53-bit mantissa draw; avoids distribution objects so results are
  // reproducible across standard libraries.
  return std::ldexp(static_cast<double>(gen() >> 11), -53);
}

}  // namespace

void DfsmnConfig::validate() const {
  if (num_blocks < 1 || hidden_size < 1 || proj_size < 1 || input_dim < 1 ||
      num_outputs < 1 || stride < 1)
    throw InvalidArgumentError("dfsmn config: sizes must be >= 1");
  if (lookback_order < 0 || lookahead_order < 0)
    throw InvalidArgumentError("dfsmn config: memory orders must be >= 0");
  if (dropout < 0.0 || dropout >= 1.0)
    throw InvalidArgumentError("dfsmn config: dropout must be in [0,1)");
}

template <typename S>
DfsmnModelT<S> make_dfsmn(const DfsmnConfig& cfg) {
  cfg.validate();
  DfsmnModelT<S> m;
  m.config = cfg;
  m.input_layer.weight = MatrixT<S>::Zero(cfg.hidden_size, cfg.input_dim);
  m.input_layer.bias = VectorT<S>::Zero(cfg.hidden_size);
  m.blocks.resize(cfg.num_blocks);
  for (auto& b : m.blocks) {
    b.in_proj.weight = MatrixT<S>::Zero(cfg.proj_size, cfg.hidden_size);
    b.in_proj.bias = VectorT<S>::Zero(cfg.proj_size);
    b.taps = MatrixT<S>::Zero(cfg.proj_size, cfg.tap_len());
    b.out_proj.weight = MatrixT<S>::Zero(cfg.hidden_size, cfg.proj_size);
    b.out_proj.bias = VectorT<S>::Zero(cfg.hidden_size);
  }
  m.final_ff.weight = MatrixT<S>::Zero(cfg.hidden_size, cfg.hidden_size);
  m.final_ff.bias = VectorT<S>::Zero(cfg.hidden_size);
  m.output_head.weight = MatrixT<S>::Zero(cfg.num_outputs, cfg.hidden_size);
  m.output_head.bias = VectorT<S>::Zero(cfg.num_outputs);
  m.instance_id = next_instance_id();
  return m;
}

template DfsmnModelT<float> make_dfsmn<float>(const DfsmnConfig&);
template DfsmnModelT<double> make_dfsmn<double>(const DfsmnConfig&);

DfsmnModel init_dfsmn(const DfsmnConfig& cfg, uint64_t seed) {
  DfsmnModel m = make_dfsmn<float>(cfg);
  std::mt19937_64 gen(seed);
  detail::for_each_tensor(m, [&](auto& tensor) {
    double scale = 1.0 / std::sqrt(static_cast<double>(
                       tensor.cols() > 0 ? tensor.cols() : 1));
    for (Eigen::Index i = 0; i < tensor.rows(); ++i)
      for (Eigen::Index j = 0; j < tensor.cols(); ++j)
        tensor(i, j) =
            static_cast<float>((2.0 * unit_uniform(gen) - 1.0) * scale);
  });
  // Bias vectors start at zero so a fresh head predicts 0.5 posteriors.
  m.input_layer.bias.setZero();
  for (auto& b : m.blocks) {
    b.in_proj.bias.setZero();
    b.out_proj.bias.setZero();
  }
  m.final_ff.bias.setZero();
  m.output_head.bias.setZero();
  return m;
}

template <typename S>
template <typename S2>
DfsmnModelT<S2> DfsmnModelT<S>::cast() const {
  DfsmnModelT<S2> out = make_dfsmn<S2>(config);
  out.input_layer.weight = input_layer.weight.template cast<S2>();
  out.input_layer.bias = input_layer.bias.template cast<S2>();
  for (int b = 0; b < config.num_blocks; ++b) {
    out.blocks[b].in_proj.weight =
        blocks[b].in_proj.weight.template cast<S2>();
    out.blocks[b].in_proj.bias = blocks[b].in_proj.bias.template cast<S2>();
    out.blocks[b].taps = blocks[b].taps.template cast<S2>();
    out.blocks[b].out_proj.weight =
        blocks[b].out_proj.weight.template cast<S2>();
    out.blocks[b].out_proj.bias = blocks[b].out_proj.bias.template cast<S2>();
  }
  out.final_ff.weight = final_ff.weight.template cast<S2>();
  out.final_ff.bias = final_ff.bias.template cast<S2>();
  out.output_head.weight = output_head.weight.template cast<S2>();
  out.output_head.bias = output_head.bias.template cast<S2>();
  return out;
}

template DfsmnModelT<double> DfsmnModelT<float>::cast<double>() const;
template DfsmnModelT<float> DfsmnModelT<double>::cast<float>() const;
template DfsmnModelT<float> DfsmnModelT<float>::cast<float>() const;

int64_t count_parameters(const DfsmnModel& model) {
  int64_t n = 0;
  detail::for_each_tensor(model, [&](const auto& t) { n += t.size(); });
  return n;
}

template <typename S>
MatrixT<S> dfsmn_logits(const DfsmnModelT<S>& model, const MatrixT<S>& input) {
  const DfsmnConfig& cfg = model.config;
  if (input.cols() != cfg.input_dim)
    throw DimensionError("dfsmn forward: input dim " +
                         std::to_string(input.cols()) + " != configured " +
                         std::to_string(cfg.input_dim));
  const int pad_past = cfg.lookback_order * cfg.stride;
  const int pad_future = cfg.lookahead_order * cfg.stride;

  MatrixT<S> act = detail::relu<S>(detail::affine_forward(input, model.input_layer));
  MatrixT<S> mem_prev;
  for (int b = 0; b < cfg.num_blocks; ++b) {
    const auto& block = model.blocks[b];
    MatrixT<S> p = detail::affine_forward(act, block.in_proj);
    MatrixT<S> p_ext = detail::pad_projection(p, pad_past, pad_future);
    MatrixT<S> mem = detail::apply_memory(p_ext, pad_past, input.rows(),
                                          block.taps, cfg.lookahead_order,
                                          cfg.stride);
    if (b > 0) mem += mem_prev;
    mem_prev = mem;
    act = detail::relu<S>(detail::affine_forward(mem, block.out_proj));
  }
  MatrixT<S> ff = detail::relu<S>(detail::affine_forward(act, model.final_ff));
  return detail::affine_forward(ff, model.output_head);
}

template MatrixT<float> dfsmn_logits<float>(const DfsmnModelT<float>&,
                                            const MatrixT<float>&);
template MatrixT<double> dfsmn_logits<double>(const DfsmnModelT<double>&,
                                              const MatrixT<double>&);

PosteriorTrack forward_full(const DfsmnModel& model, const FeatureMatrix& feats) {
  if (!feats.frames.allFinite())
    throw InvalidArgumentError("dfsmn forward: non-finite input features");
  MatrixF logits = dfsmn_logits(model, feats.frames);
  PosteriorTrack track;
  track.frame_shift_s = feats.frame_shift_s;
  track.values =
      logits.unaryExpr([](float z) { return sigmoid(z); }).cast<double>();
  track.channel_names = model.config.num_outputs == 3 ? mvad_channel_names()
                                                      : vad_channel_names();
  return track;
}

StreamState init_stream(const DfsmnModel& model) {
  if (!model.config.causal())
    throw InvalidArgumentError(
        "init_stream: model has lookahead > 0; streaming requires a causal "
        "model");
  StreamState state;
  state.model_id = model.instance_id;
  const int cache_rows = model.config.lookback_order * model.config.stride;
  state.caches.assign(
      model.config.num_blocks,
      MatrixF::Zero(cache_rows, model.config.proj_size));
  return state;
}

PosteriorTrack forward_streaming(const DfsmnModel& model, StreamState& state,
                                 const FeatureMatrix& chunk) {
  const DfsmnConfig& cfg = model.config;
  if (state.model_id != model.instance_id)
    throw InvalidArgumentError(
        "forward_streaming: stream state does not belong to this model");
  if (chunk.frames.rows() < 1)
    throw InvalidArgumentError("forward_streaming: empty chunk");
  if (chunk.frames.cols() != cfg.input_dim)
    throw DimensionError("forward_streaming: input dim mismatch");
  if (!chunk.frames.allFinite())
    throw InvalidArgumentError("forward_streaming: non-finite input");

  const int cache_rows = cfg.lookback_order * cfg.stride;
  const Eigen::Index t = chunk.frames.rows();

  MatrixF act = detail::relu<float>(
      detail::affine_forward(chunk.frames, model.input_layer));
  MatrixF mem_prev;
  for (int b = 0; b < cfg.num_blocks; ++b) {
    const auto& block = model.blocks[b];
    MatrixF p = detail::affine_forward(act, block.in_proj);
    MatrixF p_ext(cache_rows + t, cfg.proj_size);
    if (cache_rows > 0) p_ext.topRows(cache_rows) = state.caches[b];
    p_ext.bottomRows(t) = p;
    MatrixF mem = detail::apply_memory(p_ext, cache_rows, t, block.taps,
                                       cfg.lookahead_order, cfg.stride);
    if (b > 0) mem += mem_prev;
    mem_prev = mem;
    if (cache_rows > 0) state.caches[b] = p_ext.bottomRows(cache_rows);
    act = detail::relu<float>(detail::affine_forward(mem, block.out_proj));
  }
  MatrixF ff = detail::relu<float>(detail::affine_forward(act, model.final_ff));
  MatrixF logits = detail::affine_forward(ff, model.output_head);

  state.frames_consumed += t;
  PosteriorTrack track;
  track.frame_shift_s = chunk.frame_shift_s;
  track.values =
      logits.unaryExpr([](float z) { return sigmoid(z); }).cast<double>();
  track.channel_names =
      cfg.num_outputs == 3 ? mvad_channel_names() : vad_channel_names();
  return track;
}

}  // namespace speechpipe
