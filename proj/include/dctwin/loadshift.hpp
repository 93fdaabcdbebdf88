#pragma once

#include <cstddef>
#include <vector>

#include "dctwin/config.hpp"

namespace dctwin {

enum class ShiftAction { store = 0, passthrough = 1, release = 2 };

struct ShiftEntry {
  double amount = 0.0;         // utilization * steps
  std::size_t deadline_step = 0;  // absolute step index

  bool operator==(const ShiftEntry&) const = default;
};

// Deferred work ordered by deadline (ties keep insertion order).
class ShiftQueue {
 public:
  const std::vector<ShiftEntry>& entries() const { return entries_; }
  bool empty() const { return entries_.empty(); }
  double total() const;

  void push(double amount, std::size_t deadline_step);
  // Removes up to `limit` of work earliest-deadline-first; returns the amount removed.
  double take(double limit);
  // Removes and returns the total of every entry with deadline_step <= t.
  double take_due(std::size_t t);

  bool operator==(const ShiftQueue&) const = default;

 private:
  std::vector<ShiftEntry> entries_;
};

struct ShiftOutcome {
  double base_util = 0.0;
  double effective_util = 0.0;  // within [0, util_capacity]
  ShiftQueue new_queue;
  double stored = 0.0;    // moved into the queue this step
  double released = 0.0;  // pulled from the queue by a release action
  double forced = 0.0;    // executed because a deadline came due
  double dropped = 0.0;   // lost to capacity clipping
  double penalty = 0.0;   // drop_penalty_weight * dropped
};

// One step of the scheduler. The action phase runs first; deadline
// enforcement is evaluated against the post-action utilization. Base load
// above util_capacity is clipped and counted as dropped.
// Throws DomainError when base_util is outside [0, 1].
ShiftOutcome apply_action(const ShiftQueue& queue, double base_util, ShiftAction action, std::size_t t,
                          const LoadShiftSpec& spec);

struct FlushOutcome {
  std::vector<double> forced;  // additions per settlement step
  double dropped = 0.0;
  double penalty = 0.0;
};

// End-of-episode settlement: packs all queued work earliest-deadline-first
// into the headroom of the given settlement steps and drops the rest.
FlushOutcome flush(const ShiftQueue& queue, const std::vector<double>& base_util_remaining, const LoadShiftSpec& spec);

}  // namespace dctwin
