// Copyright 2026 The Rewind Authors
// SPDX-License-Identifier: Apache-2.0

#include "rewind/errors.hpp"

namespace rewind {

const char* err_name(Err e) {
  switch (e) {
    case Err::InvalidShape: return "InvalidShape";
    case Err::ShapeMismatch: return "ShapeMismatch";
    case Err::EmptyInput: return "EmptyInput";
    case Err::NumericalError: return "NumericalError";
    case Err::NonInvertibleHyper: return "NonInvertibleHyper";
    case Err::NotInvertible: return "NotInvertible";
    case Err::NothingToUndo: return "NothingToUndo";
    case Err::AlreadyUpdated: return "AlreadyUpdated";
    case Err::MissingActivation: return "MissingActivation";
    case Err::ChannelBroken: return "ChannelBroken";
    case Err::InvalidInjection: return "InvalidInjection";
    case Err::NotFailed: return "NotFailed";
    case Err::StorageError: return "StorageError";
    case Err::MissingLogData: return "MissingLogData";
    case Err::CorruptLog: return "CorruptLog";
    case Err::NoCheckpoint: return "NoCheckpoint";
    case Err::NoReplica: return "NoReplica";
    case Err::InvalidConfig: return "InvalidConfig";
    case Err::TooLarge: return "TooLarge";
  }
  return "Unknown";
}

Error::Error(Err code, const std::string& msg)
    : std::runtime_error(std::string(err_name(code)) + ": " + msg), code_(code) {}

void raise(Err code, const std::string& msg) { throw Error(code, msg); }

}  // namespace rewind
