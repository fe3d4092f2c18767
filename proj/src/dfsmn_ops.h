#pragma once

// Shared templated kernels for DFSMN forward/backward. Internal to src/.

#include "speechpipe/dfsmn.h"

namespace speechpipe::detail {

template <typename S>
MatrixT<S> affine_forward(const MatrixT<S>& x, const AffineT<S>& layer) {
  return (x * layer.weight.transpose()).rowwise() + layer.bias.transpose();
}

template <typename S>
MatrixT<S> relu(const MatrixT<S>& x) {
  return x.cwiseMax(S(0));
}

// Projected sequence with explicit zero context on both sides, so the tap
// loop needs no boundary branches and streaming reuses the identical kernel
// with its cache standing in for the past pad.
template <typename S>
MatrixT<S> pad_projection(const MatrixT<S>& p, int pad_past, int pad_future) {
  MatrixT<S> ext = MatrixT<S>::Zero(pad_past + p.rows() + pad_future, p.cols());
  ext.middleRows(pad_past, p.rows()) = p;
  return ext;
}

// out[t] = sum_j taps.col(j) ∘ p_ext[pad_past + t - (j - lookahead)*stride]
template <typename S>
MatrixT<S> apply_memory(const MatrixT<S>& p_ext, int pad_past,
                        Eigen::Index t_out, const MatrixT<S>& taps,
                        int lookahead, int stride) {
  MatrixT<S> out = MatrixT<S>::Zero(t_out, taps.rows());
  for (int j = 0; j < taps.cols(); ++j) {
    int start = pad_past - (j - lookahead) * stride;
    out.array() +=
        p_ext.middleRows(start, t_out).array().rowwise() *
        taps.col(j).transpose().array();
  }
  return out;
}

// Adjoint of apply_memory with respect to the padded projection.
template <typename S>
MatrixT<S> memory_backward_input(const MatrixT<S>& d_mem, Eigen::Index ext_rows,
                                 int pad_past, const MatrixT<S>& taps,
                                 int lookahead, int stride) {
  MatrixT<S> d_ext = MatrixT<S>::Zero(ext_rows, taps.rows());
  for (int j = 0; j < taps.cols(); ++j) {
    int start = pad_past - (j - lookahead) * stride;
    d_ext.middleRows(start, d_mem.rows()).array() +=
        d_mem.array().rowwise() * taps.col(j).transpose().array();
  }
  return d_ext;
}

// Gradient of the taps given the padded projection and d_mem.
template <typename S>
MatrixT<S> memory_backward_taps(const MatrixT<S>& d_mem,
                                const MatrixT<S>& p_ext, int pad_past,
                                int tap_len, int lookahead, int stride) {
  MatrixT<S> d_taps = MatrixT<S>::Zero(d_mem.cols(), tap_len);
  for (int j = 0; j < tap_len; ++j) {
    int start = pad_past - (j - lookahead) * stride;
    d_taps.col(j) =
        (d_mem.array() * p_ext.middleRows(start, d_mem.rows()).array())
            .colwise()
            .sum();
  }
  return d_taps;
}

// Visits corresponding tensors of four model-shaped containers in lockstep
// (weights, gradients, Adam moments).
template <typename M1, typename M2, typename M3, typename M4, typename Fn>
void for_each_tensor_zip(M1& a, M2& b, M3& c, M4& d, Fn&& fn) {
  fn(a.input_layer.weight, b.input_layer.weight, c.input_layer.weight,
     d.input_layer.weight);
  fn(a.input_layer.bias, b.input_layer.bias, c.input_layer.bias,
     d.input_layer.bias);
  for (size_t i = 0; i < a.blocks.size(); ++i) {
    fn(a.blocks[i].in_proj.weight, b.blocks[i].in_proj.weight,
       c.blocks[i].in_proj.weight, d.blocks[i].in_proj.weight);
    fn(a.blocks[i].in_proj.bias, b.blocks[i].in_proj.bias,
       c.blocks[i].in_proj.bias, d.blocks[i].in_proj.bias);
    fn(a.blocks[i].taps, b.blocks[i].taps, c.blocks[i].taps, d.blocks[i].taps);
    fn(a.blocks[i].out_proj.weight, b.blocks[i].out_proj.weight,
       c.blocks[i].out_proj.weight, d.blocks[i].out_proj.weight);
    fn(a.blocks[i].out_proj.bias, b.blocks[i].out_proj.bias,
       c.blocks[i].out_proj.bias, d.blocks[i].out_proj.bias);
  }
  fn(a.final_ff.weight, b.final_ff.weight, c.final_ff.weight,
     d.final_ff.weight);
  fn(a.final_ff.bias, b.final_ff.bias, c.final_ff.bias, d.final_ff.bias);
  fn(a.output_head.weight, b.output_head.weight, c.output_head.weight,
     d.output_head.weight);
  fn(a.output_head.bias, b.output_head.bias, c.output_head.bias,
     d.output_head.bias);
}

// Visits every parameter tensor in serialization order. Model may be const
// or mutable; fn sees matching reference constness.
template <typename Model, typename Fn>
void for_each_tensor(Model& model, Fn&& fn) {
  fn(model.input_layer.weight);
  fn(model.input_layer.bias);
  for (auto& block : model.blocks) {
    fn(block.in_proj.weight);
    fn(block.in_proj.bias);
    fn(block.taps);
    fn(block.out_proj.weight);
    fn(block.out_proj.bias);
  }
  fn(model.final_ff.weight);
  fn(model.final_ff.bias);
  fn(model.output_head.weight);
  fn(model.output_head.bias);
}

}  // namespace speechpipe::detail
