// Copyright 2026 The Rewind Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace rewind {

enum class SlotKind : std::uint8_t { Forward, Backward, Bubble };

struct Slot {
  SlotKind kind = SlotKind::Bubble;
  std::uint32_t mb = 0;
};

// One-forward-one-backward pipeline schedule as a uniform slot grid: one row
// per stage, one column per slot, 2*(m+p-1) slots per iteration. Forward and
// backward each occupy one slot.
struct Schedule {
  int stages = 0;         // p
  int micro_batches = 0;  // m
  std::vector<std::vector<Slot>> rows;

  std::size_t slots_per_iteration() const {
    return rows.empty() ? 0 : rows.front().size();
  }
};

// Exact rational, reduced.
struct Ratio {
  long long num = 0;
  long long den = 1;
  double value() const { return static_cast<double>(num) / static_cast<double>(den); }
  bool operator==(const Ratio&) const = default;
};

Schedule build_1f1b_schedule(int p, int m);

// (p-1)/(m+p-1); equals the idle-slot fraction of the built schedule.
Ratio bubble_ratio(int p, int m);

// Per-slot dependency, uniqueness and in-flight checks; throws on violation.
void validate_schedule(const Schedule& s);

std::size_t count_bubbles(const Schedule& s);

// Printable grid, one row per stage: F<mb>, B<mb>, '.' for bubbles.
std::string schedule_grid(const Schedule& s);

}  // namespace rewind
