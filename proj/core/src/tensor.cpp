// Copyright 2026 The Rewind Authors
// SPDX-License-Identifier: Apache-2.0

#include "rewind/tensor.hpp"

#include <cmath>

#include "rewind/errors.hpp"

namespace rewind {

Tensor::Tensor(std::vector<std::size_t> s, std::vector<double> d)
    : shape(std::move(s)), data(std::move(d)) {
  if (shape_elements(shape) != data.size()) {
    raise(Err::InvalidShape, "data length does not match shape");
  }
}

Tensor Tensor::zeros(std::vector<std::size_t> shape) {
  std::size_t n = shape_elements(shape);
  Tensor t;
  t.shape = std::move(shape);
  t.data.assign(n, 0.0);
  return t;
}

Tensor Tensor::scalar_row(std::initializer_list<double> values) {
  Tensor t;
  t.shape = {values.size()};
  t.data.assign(values.begin(), values.end());
  if (t.data.empty()) raise(Err::InvalidShape, "empty tensor literal");
  return t;
}

std::size_t Tensor::rows() const {
  if (shape.size() != 2) raise(Err::InvalidShape, "expected 2-D tensor");
  return shape[0];
}

std::size_t Tensor::cols() const {
  if (shape.size() != 2) raise(Err::InvalidShape, "expected 2-D tensor");
  return shape[1];
}

double& Tensor::at(std::size_t r, std::size_t c) { return data[r * cols() + c]; }

double Tensor::at(std::size_t r, std::size_t c) const {
  return data[r * cols() + c];
}

std::size_t shape_elements(const std::vector<std::size_t>& shape) {
  if (shape.empty()) raise(Err::InvalidShape, "empty shape");
  std::size_t n = 1;
  for (std::size_t e : shape) {
    if (e == 0) raise(Err::InvalidShape, "zero extent");
    n *= e;
  }
  return n;
}

void check_finite(const Tensor& t, const char* what) {
  for (double v : t.data) {
    if (!std::isfinite(v)) {
      raise(Err::NumericalError, std::string("non-finite value in ") + what);
    }
  }
}

std::uint64_t mix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

std::uint64_t derive_seed(std::uint64_t base,
                          std::initializer_list<std::uint64_t> parts) {
  std::uint64_t h = mix64(base);
  for (std::uint64_t p : parts) {
    h = mix64(h ^ mix64(p));
  }
  return h;
}

std::uint64_t Rng::value_at(std::uint64_t seed, std::uint64_t index) {
  return mix64(mix64(seed) ^ (index * 0x9E3779B97F4A7C15ull + 1));
}

double Rng::unit_at(std::uint64_t seed, std::uint64_t index) {
  // Top 53 bits -> [0,1) on an exact power-of-two grid.
  return static_cast<double>(value_at(seed, index) >> 11) * 0x1.0p-53;
}

Tensor seeded_fill(const std::vector<std::size_t>& shape, std::uint64_t seed) {
  std::size_t n = shape_elements(shape);
  Tensor t;
  t.shape = shape;
  t.data.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    t.data[i] = (Rng::unit_at(seed, i) * 2.0 - 1.0) * 0.1;
  }
  return t;
}

Tensor ordered_sum(std::span<const Tensor> tensors) {
  if (tensors.empty()) raise(Err::EmptyInput, "ordered_sum of nothing");
  Tensor acc = tensors.front();
  for (std::size_t k = 1; k < tensors.size(); ++k) {
    const Tensor& t = tensors[k];
    if (!acc.same_shape(t)) raise(Err::ShapeMismatch, "ordered_sum shapes differ");
    for (std::size_t i = 0; i < acc.data.size(); ++i) {
      acc.data[i] += t.data[i];
    }
  }
  check_finite(acc, "ordered_sum");
  return acc;
}

double l2_norm(const Tensor& t) {
  if (t.empty()) raise(Err::EmptyInput, "l2_norm of empty tensor");
  double sum = 0.0;
  for (double v : t.data) sum += v * v;
  double out = std::sqrt(sum);
  if (!std::isfinite(out)) raise(Err::NumericalError, "l2_norm overflow");
  return out;
}

}  // namespace rewind
