// Copyright 2026 The Rewind Authors
// SPDX-License-Identifier: Apache-2.0

#include "rewind/schedule.hpp"

#include <numeric>
#include <sstream>

#include "rewind/errors.hpp"

namespace rewind {

namespace {

struct StageProgress {
  int fwd_done = 0;
  int bwd_done = 0;
  // Slot at which each forward/backward completed, for dependency checks.
  std::vector<int> fwd_slot;
  std::vector<int> bwd_slot;
};

}  // namespace

Schedule build_1f1b_schedule(int p, int m) {
  if (p < 1 || m < 1) raise(Err::InvalidConfig, "p and m must be >= 1");
  Schedule s;
  s.stages = p;
  s.micro_batches = m;
  s.rows.assign(static_cast<std::size_t>(p), {});

  std::vector<StageProgress> prog(static_cast<std::size_t>(p));
  for (auto& pr : prog) {
    pr.fwd_slot.assign(static_cast<std::size_t>(m), -1);
    pr.bwd_slot.assign(static_cast<std::size_t>(m), -1);
  }

  // Warm-up depth: stage s admits at most min(m, p-s) in-flight micro-batches.
  auto warmup = [&](int stage) { return std::min(m, p - stage); };

  int done_stages = 0;
  for (int slot = 0; done_stages < p; ++slot) {
    done_stages = 0;
    for (int st = 0; st < p; ++st) {
      auto& pr = prog[static_cast<std::size_t>(st)];
      Slot action;  // defaults to Bubble

      int nb = pr.bwd_done;
      bool bwd_ready =
          nb < m && (st == p - 1 ? pr.fwd_slot[static_cast<std::size_t>(nb)] >= 0 &&
                                       pr.fwd_slot[static_cast<std::size_t>(nb)] < slot
                                 : prog[static_cast<std::size_t>(st + 1)]
                                           .bwd_slot[static_cast<std::size_t>(nb)] >= 0 &&
                                       prog[static_cast<std::size_t>(st + 1)]
                                               .bwd_slot[static_cast<std::size_t>(nb)] < slot);
      int nf = pr.fwd_done;
      bool fwd_ready =
          nf < m &&
          (st == 0 || (prog[static_cast<std::size_t>(st - 1)]
                               .fwd_slot[static_cast<std::size_t>(nf)] >= 0 &&
                       prog[static_cast<std::size_t>(st - 1)]
                               .fwd_slot[static_cast<std::size_t>(nf)] < slot));
      bool inflight_ok = (pr.fwd_done - pr.bwd_done) < warmup(st);

      if (bwd_ready) {
        action = {SlotKind::Backward, static_cast<std::uint32_t>(nb)};
        pr.bwd_slot[static_cast<std::size_t>(nb)] = slot;
        pr.bwd_done++;
      } else if (fwd_ready && inflight_ok) {
        action = {SlotKind::Forward, static_cast<std::uint32_t>(nf)};
        pr.fwd_slot[static_cast<std::size_t>(nf)] = slot;
        pr.fwd_done++;
      }
      s.rows[static_cast<std::size_t>(st)].push_back(action);
      if (pr.bwd_done == m) done_stages++;
    }
  }

  // Pad every row to the full flush length so the grid is rectangular.
  std::size_t len = 0;
  for (auto& row : s.rows) len = std::max(len, row.size());
  for (auto& row : s.rows) row.resize(len, Slot{});
  return s;
}

Ratio bubble_ratio(int p, int m) {
  if (p < 1 || m < 1) raise(Err::InvalidConfig, "p and m must be >= 1");
  long long num = p - 1;
  long long den = m + p - 1;
  long long g = std::gcd(num, den);
  if (g == 0) return {0, 1};
  return {num / g, den / g};
}

void validate_schedule(const Schedule& s) {
  int p = s.stages, m = s.micro_batches;
  if (p < 1 || m < 1 || s.rows.size() != static_cast<std::size_t>(p)) {
    raise(Err::InvalidConfig, "malformed schedule");
  }
  std::size_t len = s.slots_per_iteration();
  std::vector<std::vector<int>> fwd(static_cast<std::size_t>(p),
                                    std::vector<int>(static_cast<std::size_t>(m), -1));
  std::vector<std::vector<int>> bwd = fwd;

  for (int st = 0; st < p; ++st) {
    if (s.rows[static_cast<std::size_t>(st)].size() != len) {
      raise(Err::InvalidConfig, "ragged schedule rows");
    }
    int inflight = 0;
    for (std::size_t slot = 0; slot < len; ++slot) {
      const Slot& a = s.rows[static_cast<std::size_t>(st)][slot];
      if (a.kind == SlotKind::Forward) {
        if (a.mb >= static_cast<std::uint32_t>(m) || fwd[st][a.mb] != -1) {
          raise(Err::InvalidConfig, "duplicate or out-of-range forward");
        }
        fwd[st][a.mb] = static_cast<int>(slot);
        inflight++;
      } else if (a.kind == SlotKind::Backward) {
        if (a.mb >= static_cast<std::uint32_t>(m) || bwd[st][a.mb] != -1) {
          raise(Err::InvalidConfig, "duplicate or out-of-range backward");
        }
        bwd[st][a.mb] = static_cast<int>(slot);
        inflight--;
      }
      if (inflight > std::min(m, p - st)) {
        raise(Err::InvalidConfig, "in-flight bound exceeded");
      }
    }
  }
  for (int st = 0; st < p; ++st) {
    for (int b = 0; b < m; ++b) {
      if (fwd[st][b] < 0 || bwd[st][b] < 0) {
        raise(Err::InvalidConfig, "missing forward or backward slot");
      }
      if (st > 0 && fwd[st][b] <= fwd[st - 1][b]) {
        raise(Err::InvalidConfig, "forward dependency violated");
      }
      if (st + 1 < p && bwd[st][b] <= bwd[st + 1][b]) {
        raise(Err::InvalidConfig, "backward dependency violated");
      }
      if (bwd[st][b] <= fwd[st][b]) {
        raise(Err::InvalidConfig, "backward before forward");
      }
    }
  }
}

std::size_t count_bubbles(const Schedule& s) {
  std::size_t n = 0;
  for (const auto& row : s.rows) {
    for (const Slot& a : row) {
      if (a.kind == SlotKind::Bubble) n++;
    }
  }
  return n;
}

std::string schedule_grid(const Schedule& s) {
  std::ostringstream out;
  int width = s.micro_batches > 10 ? 3 : 2;
  for (int st = 0; st < s.stages; ++st) {
    out << "P" << st << " |";
    for (const Slot& a : s.rows[static_cast<std::size_t>(st)]) {
      std::string cell;
      if (a.kind == SlotKind::Forward) cell = "F" + std::to_string(a.mb);
      else if (a.kind == SlotKind::Backward) cell = "B" + std::to_string(a.mb);
      else cell = ".";
      out << ' ' << cell;
      for (int pad = static_cast<int>(cell.size()); pad < width; ++pad) out << ' ';
    }
    out << '\n';
  }
  return out.str();
}

}  // namespace rewind
