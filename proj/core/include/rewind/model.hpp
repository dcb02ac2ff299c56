// Copyright 2026 The Rewind Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <vector>

#include "rewind/optim.hpp"

namespace rewind {

// One affine + tanh layer: y = tanh(x W + b).
struct Layer {
  ParamBlock weight;  // [in, out]
  ParamBlock bias;    // [out]
  std::size_t in_dim = 0, out_dim = 0;
};

// Contiguous model partition owned by one worker. Forward activations are
// cached per micro-batch and consumed by the matching backward.
struct Stage {
  int stage_id = 0;
  std::size_t input_dim = 0, output_dim = 0;
  std::vector<Layer> layers;

  struct MicroBatchCache {
    Tensor input;
    std::vector<Tensor> outputs;  // per-layer tanh outputs
  };
  std::map<std::uint32_t, MicroBatchCache> cache;

  // weight, bias per layer in layer order.
  std::vector<ParamBlock*> blocks();
  std::vector<const ParamBlock*> blocks() const;
  void clear_cache() { cache.clear(); }
};

Stage make_stage(int stage_id, std::size_t input_dim, std::size_t hidden_dim,
                 std::size_t output_dim, int num_layers, std::uint64_t seed);

// Deterministic forward pass; caches activations under mb for the backward.
Tensor forward_stage(Stage& stage, const Tensor& activation_in, std::uint32_t mb);

struct StageBackward {
  Tensor grad_out;                  // dL/d(stage input), feeds the predecessor
  std::vector<Tensor> param_grads;  // matches Stage::blocks() order
};

// Exact analytic backward for the cached forward of mb; frees the cache entry.
StageBackward backward_stage(Stage& stage, const Tensor& grad_in, std::uint32_t mb);

// Micro-batch gradient accumulation: per-block ordered_sum in the order given
// (callers pass ascending mb), bit-reproducible.
std::vector<Tensor> accumulate_grads(std::span<const std::vector<Tensor>> per_mb);

struct LossGrad {
  double loss;  // mean squared error of this micro-batch
  Tensor grad;  // dL/d(prediction) with the 1/micro_batches factor folded in
};
LossGrad mse_loss(const Tensor& prediction, const Tensor& target,
                  std::size_t micro_batches);

// Seed-derived synthetic samples; no data files, fully replayable.
Tensor synth_inputs(std::uint64_t seed, std::uint64_t iteration,
                    std::uint64_t sample_stream, std::size_t rows, std::size_t dim);
Tensor synth_targets(std::uint64_t seed, std::uint64_t iteration,
                     std::uint64_t sample_stream, std::size_t rows, std::size_t dim);

}  // namespace rewind
