#include "dctwin/loadshift.hpp"

#include <algorithm>

#include "dctwin/error.hpp"
#include "dctwin/format.hpp"

namespace dctwin {

double ShiftQueue::total() const {
  double sum = 0.0;
  for (const auto& e : entries_) sum += e.amount;
  return sum;
}

void ShiftQueue::push(double amount, std::size_t deadline_step) {
  if (!(amount > 0.0)) return;
  auto pos = std::upper_bound(entries_.begin(), entries_.end(), deadline_step,
                              [](std::size_t d, const ShiftEntry& e) { return d < e.deadline_step; });
  entries_.insert(pos, ShiftEntry{amount, deadline_step});
}

double ShiftQueue::take(double limit) {
  double taken = 0.0;
  std::size_t consumed = 0;
  for (auto& e : entries_) {
    const double room = limit - taken;
    if (!(room > 0.0)) break;
    if (e.amount <= room) {
      taken += e.amount;
      ++consumed;
    } else {
      e.amount -= room;
      taken += room;
      break;
    }
  }
  entries_.erase(entries_.begin(), entries_.begin() + static_cast<std::ptrdiff_t>(consumed));
  return taken;
}

double ShiftQueue::take_due(std::size_t t) {
  double due = 0.0;
  std::size_t n = 0;
  while (n < entries_.size() && entries_[n].deadline_step <= t) due += entries_[n++].amount;
  entries_.erase(entries_.begin(), entries_.begin() + static_cast<std::ptrdiff_t>(n));
  return due;
}

ShiftOutcome apply_action(const ShiftQueue& queue, double base_util, ShiftAction action, std::size_t t,
                          const LoadShiftSpec& spec) {
  if (!(base_util >= 0.0 && base_util <= 1.0)) {
    throw DomainError("base utilization " + format_double(base_util) + " outside [0, 1]");
  }
  const double cap = spec.util_capacity;

  ShiftOutcome out;
  out.base_util = base_util;
  out.new_queue = queue;
  double util = base_util;

  switch (action) {
    case ShiftAction::store:
      out.stored = spec.shiftable_fraction * base_util;
      util = base_util - out.stored;
      out.new_queue.push(out.stored, t + static_cast<std::size_t>(spec.deadline_steps));
      break;
    case ShiftAction::passthrough:
      break;
    case ShiftAction::release:
      out.released = out.new_queue.take(std::max(cap - base_util, 0.0));
      util = base_util + out.released;
      break;
  }

  const double due = out.new_queue.take_due(t);
  if (due > 0.0) {
    out.forced = std::min(due, std::max(cap - util, 0.0));
    out.dropped = due - out.forced;
    util += out.forced;
  }

  if (util > cap) {
    out.dropped += util - cap;
    util = cap;
  }
  out.effective_util = util;
  out.penalty = spec.drop_penalty_weight * out.dropped;
  return out;
}

FlushOutcome flush(const ShiftQueue& queue, const std::vector<double>& base_util_remaining, const LoadShiftSpec& spec) {
  FlushOutcome out;
  ShiftQueue q = queue;
  out.forced.reserve(base_util_remaining.size());
  for (double base : base_util_remaining) out.forced.push_back(q.take(std::max(spec.util_capacity - base, 0.0)));
  out.dropped = q.total();
  out.penalty = spec.drop_penalty_weight * out.dropped;
  return out;
}

}  // namespace dctwin
