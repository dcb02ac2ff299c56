// Copyright 2026 The Rewind Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <initializer_list>
#include <span>
#include <vector>

namespace rewind {

// Flat row-major dense tensor of 64-bit reals. All engine state (parameters,
// gradients, optimizer moments, activations) lives in these.
struct Tensor {
  std::vector<std::size_t> shape;
  std::vector<double> data;

  Tensor() = default;
  Tensor(std::vector<std::size_t> s, std::vector<double> d);

  static Tensor zeros(std::vector<std::size_t> shape);
  static Tensor scalar_row(std::initializer_list<double> values);  // shape [n]

  std::size_t size() const { return data.size(); }
  bool empty() const { return data.empty(); }
  bool same_shape(const Tensor& o) const { return shape == o.shape; }

  // 2-D accessors; shape must be [rows, cols].
  std::size_t rows() const;
  std::size_t cols() const;
  double& at(std::size_t r, std::size_t c);
  double at(std::size_t r, std::size_t c) const;
};

// Product of extents. Empty shape or a zero extent raises InvalidShape.
std::size_t shape_elements(const std::vector<std::size_t>& shape);

// Raises NumericalError if any element is NaN or infinite.
void check_finite(const Tensor& t, const char* what);

// SplitMix64 finalizer; the basis of all seeding and hashing of ids.
std::uint64_t mix64(std::uint64_t x);
std::uint64_t derive_seed(std::uint64_t base,
                          std::initializer_list<std::uint64_t> parts);

// Counter-based generator: draw k is a pure function of (seed, k), so any
// stream position can be re-derived without replaying earlier draws.
struct Rng {
  std::uint64_t seed = 0;
  std::uint64_t counter = 0;

  explicit Rng(std::uint64_t s) : seed(s) {}

  static std::uint64_t value_at(std::uint64_t seed, std::uint64_t index);
  static double unit_at(std::uint64_t seed, std::uint64_t index);  // [0,1)

  std::uint64_t next_u64() { return value_at(seed, counter++); }
  double next_unit() { return unit_at(seed, counter++); }
  // Uniform in [lo, hi).
  double next_in(double lo, double hi) { return lo + next_unit() * (hi - lo); }
};

// Deterministic pseudo-uniform fill in [-0.1, 0.1].
Tensor seeded_fill(const std::vector<std::size_t>& shape, std::uint64_t seed);

// Element-wise sum in the given sequence order, left to right, never
// re-associated. Identical inputs in identical order give identical bits.
Tensor ordered_sum(std::span<const Tensor> tensors);

// sqrt of sum of squares, fixed left-to-right accumulation.
double l2_norm(const Tensor& t);

}  // namespace rewind
