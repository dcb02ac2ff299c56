// Copyright 2026 The Rewind Authors
// SPDX-License-Identifier: Apache-2.0

#include "rewind/optim.hpp"

#include <cmath>
#include <string>

#include "rewind/errors.hpp"

namespace rewind {

const char* optimizer_name(OptimizerKind k) {
  switch (k) {
    case OptimizerKind::Sgd: return "sgd";
    case OptimizerKind::SgdMomentum: return "sgdm";
    case OptimizerKind::Adam: return "adam";
    case OptimizerKind::AdamW: return "adamw";
    case OptimizerKind::Lamb: return "lamb";
    case OptimizerKind::AmsGrad: return "amsgrad";
  }
  return "?";
}

std::optional<OptimizerKind> optimizer_from_name(std::string_view name) {
  if (name == "sgd") return OptimizerKind::Sgd;
  if (name == "sgdm" || name == "sgd_momentum") return OptimizerKind::SgdMomentum;
  if (name == "adam") return OptimizerKind::Adam;
  if (name == "adamw") return OptimizerKind::AdamW;
  if (name == "lamb") return OptimizerKind::Lamb;
  if (name == "amsgrad") return OptimizerKind::AmsGrad;
  return std::nullopt;
}

Invertibility invertibility_check(OptimizerKind kind) {
  switch (kind) {
    case OptimizerKind::Sgd:
    case OptimizerKind::SgdMomentum:
    case OptimizerKind::Adam:
    case OptimizerKind::AdamW:
      return Invertibility::Invertible;
    case OptimizerKind::Lamb:
      return Invertibility::InvertibleWithSavedScalars;
    case OptimizerKind::AmsGrad:
      return Invertibility::NotInvertible;
  }
  return Invertibility::NotInvertible;
}

double OptimizerHyper::lr_at(std::uint64_t t) const {
  double out = lr;
  for (const auto& [from, value] : lr_table) {
    if (t >= from) out = value;
  }
  if (!(out > 0.0)) raise(Err::InvalidConfig, "learning rate must be positive");
  return out;
}

void OptimizerHyper::validate() const {
  if (!(lr > 0.0)) raise(Err::InvalidConfig, "optimizer.lr must be > 0");
  if (weight_decay < 0.0) raise(Err::InvalidConfig, "optimizer.weight_decay must be >= 0");
  if (momentum < 0.0 || momentum > 1.0) raise(Err::InvalidConfig, "optimizer.momentum must be in [0,1]");
  if (dampening < 0.0 || dampening > 1.0) raise(Err::InvalidConfig, "optimizer.dampening must be in [0,1]");
  if (beta1 < 0.0 || beta1 >= 1.0) raise(Err::InvalidConfig, "optimizer.beta1 must be in [0,1)");
  if (beta2 < 0.0 || beta2 >= 1.0) raise(Err::InvalidConfig, "optimizer.beta2 must be in [0,1)");
  if (!(eps > 0.0)) raise(Err::InvalidConfig, "optimizer.eps must be > 0");
  for (const auto& [from, value] : lr_table) {
    (void)from;
    if (!(value > 0.0)) raise(Err::InvalidConfig, "optimizer.lr_table entries must be > 0");
  }
}

ParamBlock ParamBlock::make(std::vector<std::size_t> shape, std::uint64_t seed) {
  ParamBlock b;
  b.x = seeded_fill(shape, seed);
  b.g = Tensor::zeros(shape);
  b.m = Tensor::zeros(shape);
  b.v = Tensor::zeros(shape);
  return b;
}

namespace {

void require_same_shape(const ParamBlock& block, const Tensor& grad) {
  if (!block.x.same_shape(grad)) {
    raise(Err::ShapeMismatch, "gradient shape does not match block");
  }
}

// Bias corrections are recomputed from t on both step and undo, never stored.
struct BiasCorrection {
  double c1, c2;
};
BiasCorrection bias_correction(const OptimizerHyper& h, std::uint64_t t) {
  return {1.0 - std::pow(h.beta1, static_cast<double>(t)),
          1.0 - std::pow(h.beta2, static_cast<double>(t))};
}

void step_sgd(ParamBlock& b, const OptimizerHyper& h, double eta) {
  for (std::size_t i = 0; i < b.x.size(); ++i) {
    b.x.data[i] -= eta * (b.g.data[i] + h.weight_decay * b.x.data[i]);
  }
}

void undo_sgd(ParamBlock& b, const OptimizerHyper& h, double eta) {
  double denom = 1.0 - eta * h.weight_decay;
  if (denom == 0.0) raise(Err::NonInvertibleHyper, "lr*weight_decay == 1 for sgd");
  for (std::size_t i = 0; i < b.x.size(); ++i) {
    b.x.data[i] = (b.x.data[i] + eta * b.g.data[i]) / denom;
  }
}

void step_sgdm(ParamBlock& b, const OptimizerHyper& h, double eta) {
  for (std::size_t i = 0; i < b.x.size(); ++i) {
    double gd = b.g.data[i] + h.weight_decay * b.x.data[i];
    b.m.data[i] = h.momentum * b.m.data[i] + (1.0 - h.dampening) * gd;
    b.x.data[i] -= eta * b.m.data[i];
  }
}

void undo_sgdm(ParamBlock& b, const OptimizerHyper& h, double eta) {
  if (h.momentum == 0.0) raise(Err::NonInvertibleHyper, "momentum == 0 for sgdm");
  for (std::size_t i = 0; i < b.x.size(); ++i) {
    double xt = b.x.data[i] + eta * b.m.data[i];
    double gd = b.g.data[i] + h.weight_decay * xt;
    b.m.data[i] = (b.m.data[i] - (1.0 - h.dampening) * gd) / h.momentum;
    b.x.data[i] = xt;
  }
}

void step_adam(ParamBlock& b, const OptimizerHyper& h, double eta) {
  auto [c1, c2] = bias_correction(h, b.t + 1);
  for (std::size_t i = 0; i < b.x.size(); ++i) {
    double gd = b.g.data[i] + h.weight_decay * b.x.data[i];
    b.m.data[i] = h.beta1 * b.m.data[i] + (1.0 - h.beta1) * gd;
    b.v.data[i] = h.beta2 * b.v.data[i] + (1.0 - h.beta2) * gd * gd;
    double mhat = b.m.data[i] / c1;
    double vhat = b.v.data[i] / c2;
    b.x.data[i] -= eta * mhat / (std::sqrt(vhat) + h.eps);
  }
}

void undo_adam(ParamBlock& b, const OptimizerHyper& h, double eta) {
  if (h.beta1 == 0.0 || h.beta2 == 0.0) {
    raise(Err::NonInvertibleHyper, "beta1*beta2 == 0 for adam");
  }
  auto [c1, c2] = bias_correction(h, b.t);
  for (std::size_t i = 0; i < b.x.size(); ++i) {
    double mhat = b.m.data[i] / c1;
    double vhat = b.v.data[i] / c2;
    double xt = b.x.data[i] + eta * mhat / (std::sqrt(vhat) + h.eps);
    double gd = b.g.data[i] + h.weight_decay * xt;
    b.m.data[i] = (b.m.data[i] - (1.0 - h.beta1) * gd) / h.beta1;
    b.v.data[i] = (b.v.data[i] - (1.0 - h.beta2) * gd * gd) / h.beta2;
    b.x.data[i] = xt;
  }
}

// Decoupled weight decay: x' = x - eta*(mhat/(sqrt(vhat)+eps) + lambda*x).
void step_adamw(ParamBlock& b, const OptimizerHyper& h, double eta) {
  auto [c1, c2] = bias_correction(h, b.t + 1);
  for (std::size_t i = 0; i < b.x.size(); ++i) {
    double gd = b.g.data[i];
    b.m.data[i] = h.beta1 * b.m.data[i] + (1.0 - h.beta1) * gd;
    b.v.data[i] = h.beta2 * b.v.data[i] + (1.0 - h.beta2) * gd * gd;
    double mhat = b.m.data[i] / c1;
    double vhat = b.v.data[i] / c2;
    b.x.data[i] -= eta * (mhat / (std::sqrt(vhat) + h.eps) +
                          h.weight_decay * b.x.data[i]);
  }
}

void undo_adamw(ParamBlock& b, const OptimizerHyper& h, double eta) {
  if (h.beta1 == 0.0 || h.beta2 == 0.0) {
    raise(Err::NonInvertibleHyper, "beta1*beta2 == 0 for adamw");
  }
  double denom = 1.0 - eta * h.weight_decay;
  if (denom == 0.0) raise(Err::NonInvertibleHyper, "lr*weight_decay == 1 for adamw");
  auto [c1, c2] = bias_correction(h, b.t);
  for (std::size_t i = 0; i < b.x.size(); ++i) {
    double mhat = b.m.data[i] / c1;
    double vhat = b.v.data[i] / c2;
    double xt = (b.x.data[i] + eta * mhat / (std::sqrt(vhat) + h.eps)) / denom;
    double gd = b.g.data[i];
    b.m.data[i] = (b.m.data[i] - (1.0 - h.beta1) * gd) / h.beta1;
    b.v.data[i] = (b.v.data[i] - (1.0 - h.beta2) * gd * gd) / h.beta2;
    b.x.data[i] = xt;
  }
}

// LAMB layer update: Adam-style direction r plus decoupled decay, scaled by
// the trust ratio ||x|| / ||r + lambda*x||. The ratio is the one scalar that
// cannot be recomputed during undo (it needs the pre-step x), so step saves
// it and undo consumes it.
void step_lamb(ParamBlock& b, const OptimizerHyper& h, double eta) {
  auto [c1, c2] = bias_correction(h, b.t + 1);
  std::size_t n = b.x.size();
  std::vector<double> update(n);
  double xnorm_sq = 0.0, unorm_sq = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double gd = b.g.data[i];
    b.m.data[i] = h.beta1 * b.m.data[i] + (1.0 - h.beta1) * gd;
    b.v.data[i] = h.beta2 * b.v.data[i] + (1.0 - h.beta2) * gd * gd;
    double mhat = b.m.data[i] / c1;
    double vhat = b.v.data[i] / c2;
    update[i] = mhat / (std::sqrt(vhat) + h.eps) + h.weight_decay * b.x.data[i];
    xnorm_sq += b.x.data[i] * b.x.data[i];
    unorm_sq += update[i] * update[i];
  }
  double xnorm = std::sqrt(xnorm_sq);
  double unorm = std::sqrt(unorm_sq);
  double trust = (xnorm > 0.0 && unorm > 0.0) ? xnorm / unorm : 1.0;
  for (std::size_t i = 0; i < n; ++i) {
    b.x.data[i] -= eta * trust * update[i];
  }
  b.saved_scalars.push_back(trust);
}

void undo_lamb(ParamBlock& b, const OptimizerHyper& h, double eta) {
  if (h.beta1 == 0.0 || h.beta2 == 0.0) {
    raise(Err::NonInvertibleHyper, "beta1*beta2 == 0 for lamb");
  }
  if (b.saved_scalars.empty()) {
    raise(Err::NothingToUndo, "no saved trust ratio for lamb undo");
  }
  double trust = b.saved_scalars.back();
  double scaled = eta * trust;
  double denom = 1.0 - scaled * h.weight_decay;
  if (denom == 0.0) raise(Err::NonInvertibleHyper, "trust*lr*weight_decay == 1 for lamb");
  auto [c1, c2] = bias_correction(h, b.t);
  for (std::size_t i = 0; i < b.x.size(); ++i) {
    double mhat = b.m.data[i] / c1;
    double vhat = b.v.data[i] / c2;
    double r = mhat / (std::sqrt(vhat) + h.eps);
    double xt = (b.x.data[i] + scaled * r) / denom;
    double gd = b.g.data[i];
    b.m.data[i] = (b.m.data[i] - (1.0 - h.beta1) * gd) / h.beta1;
    b.v.data[i] = (b.v.data[i] - (1.0 - h.beta2) * gd * gd) / h.beta2;
    b.x.data[i] = xt;
  }
  b.saved_scalars.pop_back();
}

void step_amsgrad(ParamBlock& b, const OptimizerHyper& h, double eta) {
  if (b.vmax.empty()) b.vmax = Tensor::zeros(b.x.shape);
  auto [c1, c2] = bias_correction(h, b.t + 1);
  for (std::size_t i = 0; i < b.x.size(); ++i) {
    double gd = b.g.data[i] + h.weight_decay * b.x.data[i];
    b.m.data[i] = h.beta1 * b.m.data[i] + (1.0 - h.beta1) * gd;
    b.v.data[i] = h.beta2 * b.v.data[i] + (1.0 - h.beta2) * gd * gd;
    b.vmax.data[i] = std::max(b.vmax.data[i], b.v.data[i]);
    double mhat = b.m.data[i] / c1;
    double vhat = b.vmax.data[i] / c2;
    b.x.data[i] -= eta * mhat / (std::sqrt(vhat) + h.eps);
  }
}

}  // namespace

void optimizer_step(ParamBlock& block, const Tensor& grad,
                    const OptimizerHyper& hyper) {
  require_same_shape(block, grad);
  if (block.updated) {
    raise(Err::AlreadyUpdated, "block already stepped this iteration");
  }
  if (hyper.require_invertible &&
      invertibility_check(hyper.kind) == Invertibility::NotInvertible) {
    raise(Err::NotInvertible,
          std::string(optimizer_name(hyper.kind)) + " cannot be undone");
  }
  block.g = grad;
  double eta = hyper.lr_at(block.t + 1);
  switch (hyper.kind) {
    case OptimizerKind::Sgd: step_sgd(block, hyper, eta); break;
    case OptimizerKind::SgdMomentum: step_sgdm(block, hyper, eta); break;
    case OptimizerKind::Adam: step_adam(block, hyper, eta); break;
    case OptimizerKind::AdamW: step_adamw(block, hyper, eta); break;
    case OptimizerKind::Lamb: step_lamb(block, hyper, eta); break;
    case OptimizerKind::AmsGrad: step_amsgrad(block, hyper, eta); break;
  }
  block.t += 1;
  block.updated = true;
  check_finite(block.x, "optimizer_step x");
  check_finite(block.m, "optimizer_step m");
  check_finite(block.v, "optimizer_step v");
}

void optimizer_undo(ParamBlock& block, const OptimizerHyper& hyper) {
  if (!block.updated) raise(Err::NothingToUndo, "block has no pending update");
  if (hyper.kind == OptimizerKind::AmsGrad) {
    raise(Err::NotInvertible, "amsgrad element-wise max has no inverse");
  }
  double eta = hyper.lr_at(block.t);
  switch (hyper.kind) {
    case OptimizerKind::Sgd: undo_sgd(block, hyper, eta); break;
    case OptimizerKind::SgdMomentum: undo_sgdm(block, hyper, eta); break;
    case OptimizerKind::Adam: undo_adam(block, hyper, eta); break;
    case OptimizerKind::AdamW: undo_adamw(block, hyper, eta); break;
    case OptimizerKind::Lamb: undo_lamb(block, hyper, eta); break;
    case OptimizerKind::AmsGrad: break;  // unreachable
  }
  block.t -= 1;
  block.updated = false;
  check_finite(block.x, "optimizer_undo x");
  check_finite(block.m, "optimizer_undo m");
  check_finite(block.v, "optimizer_undo v");
}

}  // namespace rewind
