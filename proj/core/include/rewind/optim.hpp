// Copyright 2026 The Rewind Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <optional>
#include <string_view>
#include <utility>
#include <vector>

#include "rewind/tensor.hpp"

namespace rewind {

enum class OptimizerKind : std::uint8_t {
  Sgd,
  SgdMomentum,
  Adam,
  AdamW,
  Lamb,
  AmsGrad,
};

const char* optimizer_name(OptimizerKind k);
std::optional<OptimizerKind> optimizer_from_name(std::string_view name);

enum class Invertibility { Invertible, InvertibleWithSavedScalars, NotInvertible };

// AMSGrad's element-wise max has no inverse; LAMB needs the per-step trust
// ratio saved alongside the state; the rest invert directly.
Invertibility invertibility_check(OptimizerKind kind);

struct OptimizerHyper {
  OptimizerKind kind = OptimizerKind::Sgd;
  double lr = 0.01;
  // Optional step-indexed schedule: (from_step, lr) breakpoints, ascending.
  std::vector<std::pair<std::uint64_t, double>> lr_table;
  double weight_decay = 0.0;  // lambda
  double momentum = 0.9;      // mu   (SGD-momentum)
  double dampening = 0.0;     // tau  (SGD-momentum)
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
  // When set, stepping a non-invertible optimizer is refused up front.
  bool require_invertible = false;

  double lr_at(std::uint64_t t) const;  // t >= 1
  void validate() const;
};

// Per-layer parameter block: weights plus optimizer state. x, g, m, v share
// one shape; g caches the latest gradient (exactly one version is kept).
struct ParamBlock {
  Tensor x;  // parameters
  Tensor g;  // cached gradient used by the most recent step
  Tensor m;  // first moment / momentum
  Tensor v;  // second moment
  Tensor vmax;                        // AMSGrad only: running max of v
  std::uint64_t t = 0;                // completed steps
  std::vector<double> saved_scalars;  // LAMB trust ratios, one per step
  bool updated = false;               // set by step, cleared at iteration end

  static ParamBlock make(std::vector<std::size_t> shape, std::uint64_t seed);
  bool same_shape(const ParamBlock& o) const { return x.same_shape(o.x); }
};

// Advance the block by one step of the configured optimizer: caches grad
// into g, updates x/m/v, increments t, sets the updated flag. For LAMB the
// trust ratio used is appended to saved_scalars.
void optimizer_step(ParamBlock& block, const Tensor& grad,
                    const OptimizerHyper& hyper);

// Restore the block to its pre-step state (x_t, m_{t-1}, v_{t-1}, t-1) from
// (x_{t+1}, m_t, v_t, g_t). Clears the updated flag; pops the LAMB scalar.
void optimizer_undo(ParamBlock& block, const OptimizerHyper& hyper);

}  // namespace rewind
