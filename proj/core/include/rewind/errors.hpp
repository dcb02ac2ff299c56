// Copyright 2026 The Rewind Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <stdexcept>
#include <string>

namespace rewind {

enum class Err {
  InvalidShape,
  ShapeMismatch,
  EmptyInput,
  NumericalError,
  NonInvertibleHyper,
  NotInvertible,
  NothingToUndo,
  AlreadyUpdated,
  MissingActivation,
  ChannelBroken,
  InvalidInjection,
  NotFailed,
  StorageError,
  MissingLogData,
  CorruptLog,
  NoCheckpoint,
  NoReplica,
  InvalidConfig,
  TooLarge,
};

const char* err_name(Err e);

class Error : public std::runtime_error {
 public:
  Error(Err code, const std::string& msg);
  Err code() const { return code_; }

 private:
  Err code_;
};

[[noreturn]] void raise(Err code, const std::string& msg);

}  // namespace rewind
