// Copyright 2026 The Rewind Authors
// SPDX-License-Identifier: Apache-2.0

#include "rewind/model.hpp"

#include <cmath>

#include "rewind/errors.hpp"

namespace rewind {

std::vector<ParamBlock*> Stage::blocks() {
  std::vector<ParamBlock*> out;
  out.reserve(layers.size() * 2);
  for (auto& l : layers) {
    out.push_back(&l.weight);
    out.push_back(&l.bias);
  }
  return out;
}

std::vector<const ParamBlock*> Stage::blocks() const {
  std::vector<const ParamBlock*> out;
  out.reserve(layers.size() * 2);
  for (const auto& l : layers) {
    out.push_back(&l.weight);
    out.push_back(&l.bias);
  }
  return out;
}

Stage make_stage(int stage_id, std::size_t input_dim, std::size_t hidden_dim,
                 std::size_t output_dim, int num_layers, std::uint64_t seed) {
  if (num_layers < 1) raise(Err::InvalidConfig, "stage needs >= 1 layer");
  Stage s;
  s.stage_id = stage_id;
  s.input_dim = input_dim;
  s.output_dim = output_dim;
  for (int l = 0; l < num_layers; ++l) {
    std::size_t in = (l == 0) ? input_dim : hidden_dim;
    std::size_t out = (l == num_layers - 1) ? output_dim : hidden_dim;
    Layer layer;
    layer.in_dim = in;
    layer.out_dim = out;
    layer.weight = ParamBlock::make(
        {in, out}, derive_seed(seed, {static_cast<std::uint64_t>(stage_id),
                                      static_cast<std::uint64_t>(l), 0}));
    layer.bias = ParamBlock::make(
        {out}, derive_seed(seed, {static_cast<std::uint64_t>(stage_id),
                                  static_cast<std::uint64_t>(l), 1}));
    s.layers.push_back(std::move(layer));
  }
  return s;
}

namespace {

// y = tanh(x W + b), fixed accumulation order.
Tensor affine_tanh(const Tensor& x, const Layer& layer) {
  std::size_t rows = x.rows(), in = x.cols(), out = layer.out_dim;
  if (in != layer.in_dim) raise(Err::ShapeMismatch, "activation width mismatch");
  Tensor y = Tensor::zeros({rows, out});
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < out; ++c) {
      double acc = layer.bias.x.data[c];
      for (std::size_t k = 0; k < in; ++k) {
        acc += x.at(r, k) * layer.weight.x.data[k * out + c];
      }
      y.at(r, c) = std::tanh(acc);
    }
  }
  return y;
}

}  // namespace

Tensor forward_stage(Stage& stage, const Tensor& activation_in, std::uint32_t mb) {
  if (activation_in.shape.size() != 2 || activation_in.cols() != stage.input_dim) {
    raise(Err::ShapeMismatch, "stage input width mismatch");
  }
  Stage::MicroBatchCache c;
  c.input = activation_in;
  const Tensor* cur = &c.input;
  for (const Layer& layer : stage.layers) {
    c.outputs.push_back(affine_tanh(*cur, layer));
    cur = &c.outputs.back();
  }
  Tensor out = c.outputs.back();
  check_finite(out, "forward_stage");
  stage.cache[mb] = std::move(c);
  return out;
}

StageBackward backward_stage(Stage& stage, const Tensor& grad_in, std::uint32_t mb) {
  auto it = stage.cache.find(mb);
  if (it == stage.cache.end()) {
    raise(Err::MissingActivation, "no cached forward for micro-batch");
  }
  const Stage::MicroBatchCache& c = it->second;
  if (!grad_in.same_shape(c.outputs.back())) {
    raise(Err::ShapeMismatch, "grad width mismatch");
  }

  StageBackward result;
  result.param_grads.resize(stage.layers.size() * 2);
  Tensor upstream = grad_in;  // dL/dy of the current layer
  for (std::size_t li = stage.layers.size(); li-- > 0;) {
    const Layer& layer = stage.layers[li];
    const Tensor& y = c.outputs[li];
    const Tensor& x = (li == 0) ? c.input : c.outputs[li - 1];
    std::size_t rows = x.rows(), in = layer.in_dim, out = layer.out_dim;

    // dL/dz = dL/dy * (1 - y^2)
    Tensor dz = Tensor::zeros({rows, out});
    for (std::size_t r = 0; r < rows; ++r) {
      for (std::size_t cidx = 0; cidx < out; ++cidx) {
        double yv = y.at(r, cidx);
        dz.at(r, cidx) = upstream.at(r, cidx) * (1.0 - yv * yv);
      }
    }
    // dW = x^T dz ; db = column sums of dz ; dx = dz W^T
    Tensor dw = Tensor::zeros({in, out});
    for (std::size_t k = 0; k < in; ++k) {
      for (std::size_t cidx = 0; cidx < out; ++cidx) {
        double acc = 0.0;
        for (std::size_t r = 0; r < rows; ++r) {
          acc += x.at(r, k) * dz.at(r, cidx);
        }
        dw.data[k * out + cidx] = acc;
      }
    }
    Tensor db = Tensor::zeros({out});
    for (std::size_t cidx = 0; cidx < out; ++cidx) {
      double acc = 0.0;
      for (std::size_t r = 0; r < rows; ++r) acc += dz.at(r, cidx);
      db.data[cidx] = acc;
    }
    Tensor dx = Tensor::zeros({rows, in});
    for (std::size_t r = 0; r < rows; ++r) {
      for (std::size_t k = 0; k < in; ++k) {
        double acc = 0.0;
        for (std::size_t cidx = 0; cidx < out; ++cidx) {
          acc += dz.at(r, cidx) * layer.weight.x.data[k * out + cidx];
        }
        dx.at(r, k) = acc;
      }
    }
    result.param_grads[li * 2] = std::move(dw);
    result.param_grads[li * 2 + 1] = std::move(db);
    upstream = std::move(dx);
  }
  result.grad_out = std::move(upstream);
  check_finite(result.grad_out, "backward_stage");
  stage.cache.erase(it);
  return result;
}

std::vector<Tensor> accumulate_grads(std::span<const std::vector<Tensor>> per_mb) {
  if (per_mb.empty()) raise(Err::EmptyInput, "no partial gradients");
  std::size_t blocks = per_mb.front().size();
  std::vector<Tensor> out(blocks);
  for (std::size_t b = 0; b < blocks; ++b) {
    std::vector<Tensor> parts;
    parts.reserve(per_mb.size());
    for (const auto& mb : per_mb) {
      if (mb.size() != blocks) raise(Err::ShapeMismatch, "partial block count differs");
      parts.push_back(mb[b]);
    }
    out[b] = ordered_sum(parts);
  }
  return out;
}

LossGrad mse_loss(const Tensor& prediction, const Tensor& target,
                  std::size_t micro_batches) {
  if (!prediction.same_shape(target)) raise(Err::ShapeMismatch, "loss shapes differ");
  if (micro_batches == 0) raise(Err::InvalidConfig, "micro_batches must be >= 1");
  double n = static_cast<double>(prediction.size());
  LossGrad out{0.0, Tensor::zeros(prediction.shape)};
  double scale = 2.0 / (n * static_cast<double>(micro_batches));
  for (std::size_t i = 0; i < prediction.size(); ++i) {
    double d = prediction.data[i] - target.data[i];
    out.loss += d * d;
    out.grad.data[i] = scale * d;
  }
  out.loss /= n;
  return out;
}

Tensor synth_inputs(std::uint64_t seed, std::uint64_t iteration,
                    std::uint64_t sample_stream, std::size_t rows, std::size_t dim) {
  return seeded_fill({rows, dim}, derive_seed(seed, {1, iteration, sample_stream}));
}

Tensor synth_targets(std::uint64_t seed, std::uint64_t iteration,
                     std::uint64_t sample_stream, std::size_t rows, std::size_t dim) {
  return seeded_fill({rows, dim}, derive_seed(seed, {2, iteration, sample_stream}));
}

}  // namespace rewind
