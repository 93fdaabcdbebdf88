#include "dctwin/baselines.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <thread>

#include "dctwin/error.hpp"
#include "dctwin/format.hpp"

namespace dctwin {

namespace {

constexpr AgentActions kNeutral{ShiftAction::passthrough, HvacAction::hold, BatteryAction::idle};

// Relative tolerance for comparing carbon intensities, so that a constant
// trace never looks like a gradient after floating point averaging.
bool above(double x, double ref) { return x > ref + 1e-9 * std::max(1.0, std::abs(ref)); }
bool below(double x, double ref) { return x < ref - 1e-9 * std::max(1.0, std::abs(ref)); }

double one_step_cost(const SimState& state, const AgentActions& a) {
  SimState probe = state;
  probe.cumulative.record_series = false;
  probe.cumulative.series.clear();
  const StepResult r = step(probe, a);
  return -r.rewards[0];
}

std::vector<AgentActions> candidate_actions(bool hvac_only) {
  std::vector<AgentActions> out;
  for (int j = 0; j < kJointActionCount; ++j) {
    const AgentActions a = decode(j);
    if (hvac_only && (a.ls != ShiftAction::passthrough || a.bat != BatteryAction::idle)) continue;
    out.push_back(a);
  }
  return out;
}

struct Best {
  double cost = std::numeric_limits<double>::infinity();
  std::vector<AgentActions> actions;
  std::size_t evaluated = 0;
};

// Depth-first enumeration in increasing encoding order; strict improvement
// keeps the lexicographically smallest argmin.
void search(const SimState& state, const std::vector<AgentActions>& moves, std::vector<AgentActions>& prefix,
            Best& best) {
  for (const auto& a : moves) {
    SimState next = state;
    step(next, a);
    prefix.push_back(a);
    if (next.done()) {
      ++best.evaluated;
      const double cost = episode_cost(next);
      if (cost < best.cost) {
        best.cost = cost;
        best.actions = prefix;
      }
    } else {
      search(next, moves, prefix, best);
    }
    prefix.pop_back();
  }
}

std::vector<double> setpoint_levels(const HvacSpec& h) {
  std::vector<double> levels;
  const double ref = h.setpoint_ref;
  const int down = static_cast<int>(std::floor(ref - h.setpoint_min));
  const int up = static_cast<int>(std::floor(h.setpoint_max - ref));
  for (int k = -down; k <= up; ++k) levels.push_back(ref + k);
  return levels;
}

}  // namespace

void FixedBaseline::begin(const SimState& state) {
  const auto& h = state.cfg->hvac;
  if (hold_ < h.setpoint_min || hold_ > h.setpoint_max) {
    throw DomainError("fixed baseline setpoint " + format_double(hold_) + " outside [" + format_double(h.setpoint_min) +
                      ", " + format_double(h.setpoint_max) + "]");
  }
}

AgentActions FixedBaseline::act(const Observations&, const SimState& state) {
  AgentActions a = kNeutral;
  const double diff = hold_ - state.setpoint;
  if (diff >= 0.5) a.hvac = HvacAction::inc;
  if (diff <= -0.5) a.hvac = HvacAction::dec;
  return a;
}

void CarbonGreedy::begin(const SimState&) {
  ci_sum_ = 0.0;
  seen_ = 0;
}

ShiftAction CarbonGreedy::shift_rule(double ci_now, double forecast_mean) const {
  if (above(ci_now, forecast_mean)) return ShiftAction::store;
  if (below(ci_now, forecast_mean)) return ShiftAction::release;
  return ShiftAction::passthrough;
}

BatteryAction CarbonGreedy::battery_rule(double ci_now) const {
  if (seen_ == 0) return BatteryAction::idle;  // warmup
  const double mean = trailing_mean();
  if (below(ci_now, mean)) return BatteryAction::charge;
  if (above(ci_now, mean)) return BatteryAction::discharge;
  return BatteryAction::idle;
}

void CarbonGreedy::observe_ci(double ci_now) {
  ci_sum_ += ci_now;
  ++seen_;
}

AgentActions CarbonGreedy::act(const Observations& observations, const SimState& state) {
  const Observation& o = observations[0];
  const double ci_now = o[obs::ci_now];
  double forecast = 0.0;
  for (std::size_t k = 0; k < obs::forecast_steps; ++k) forecast += o[obs::ci_forecast + k];
  forecast /= static_cast<double>(obs::forecast_steps);

  AgentActions a;
  a.ls = shift_rule(ci_now, forecast);
  a.bat = battery_rule(ci_now);
  observe_ci(ci_now);

  // Ties go to hold, then dec, then inc.
  a.hvac = HvacAction::hold;
  double best = one_step_cost(state, a);
  for (HvacAction move : {HvacAction::dec, HvacAction::inc}) {
    AgentActions trial = a;
    trial.hvac = move;
    const double cost = one_step_cost(state, trial);
    if (cost < best) {
      best = cost;
      a.hvac = move;
    }
  }
  return a;
}

AgentActions ScheduledController::act(const Observations&, const SimState& state) {
  return state.t < plan_.size() ? plan_[state.t] : kNeutral;
}

void RandomController::begin(const SimState& state) { rng_.seed(state.rng_seed); }

AgentActions RandomController::act(const Observations&, const SimState&) {
  std::uniform_int_distribution<int> pick(0, kJointActionCount - 1);
  return decode(pick(rng_));
}

std::unique_ptr<Controller> fixed_baseline(double setpoint_hold) {
  return std::make_unique<FixedBaseline>(setpoint_hold);
}

std::unique_ptr<Controller> carbon_greedy() { return std::make_unique<CarbonGreedy>(); }

SimState run_controller(Controller& controller, std::shared_ptr<const DataCenterConfig> cfg,
                        std::shared_ptr<const AlignedTraces> traces, std::uint64_t seed, bool record_series) {
  SimState state = reset(std::move(cfg), std::move(traces), seed, record_series);
  controller.begin(state);
  Observations o = observe(state);
  while (!state.done()) {
    const AgentActions a = controller.act(o, state);
    o = step(state, a).observations;
  }
  return state;
}

SimState simulate_actions(std::shared_ptr<const DataCenterConfig> cfg, std::shared_ptr<const AlignedTraces> traces,
                          const std::vector<AgentActions>& actions, std::uint64_t seed) {
  SimState state = reset(std::move(cfg), std::move(traces), seed);
  if (actions.size() != state.horizon()) {
    throw DomainError("action list has " + std::to_string(actions.size()) + " entries, horizon is " +
                      std::to_string(state.horizon()));
  }
  for (const auto& a : actions) step(state, a);
  return state;
}

OracleResult exhaustive_oracle(const DataCenterConfig& cfg, const AlignedTraces& traces, OracleOptions options) {
  if (options.horizon_cap == 0 || options.horizon_cap > kOracleMaxHorizon) {
    throw DomainError("oracle horizon cap " + std::to_string(options.horizon_cap) + " outside [1, " +
                      std::to_string(kOracleMaxHorizon) + "]");
  }
  if (traces.horizon > options.horizon_cap) {
    throw DomainError("oracle horizon " + std::to_string(traces.horizon) + " exceeds cap " +
                      std::to_string(options.horizon_cap));
  }

  const SimState root = reset(cfg, traces, 0);
  const auto moves = candidate_actions(options.hvac_only);

  // One slot per first action; reduced in encoding order afterwards so the
  // outcome is independent of scheduling.
  std::vector<Best> slots(moves.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < moves.size(); i = next++) {
      SimState s = root;
      step(s, moves[i]);
      std::vector<AgentActions> prefix{moves[i]};
      Best& b = slots[i];
      if (s.done()) {
        b.evaluated = 1;
        b.cost = episode_cost(s);
        b.actions = prefix;
      } else {
        search(s, moves, prefix, b);
      }
    }
  };

  const unsigned workers = std::max(1u, options.workers);
  if (workers == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(worker);
  }

  OracleResult out;
  out.cost = std::numeric_limits<double>::infinity();
  for (auto& b : slots) {
    out.evaluated += b.evaluated;
    if (b.cost < out.cost) {
      out.cost = b.cost;
      out.actions = std::move(b.actions);
    }
  }
  return out;
}

std::vector<AgentActions> schedule_to_actions(const DataCenterConfig& cfg, const std::vector<double>& schedule) {
  std::vector<AgentActions> out;
  out.reserve(schedule.size());
  double prev = cfg.hvac.setpoint_ref;
  for (double s : schedule) {
    AgentActions a = kNeutral;
    const double d = s - prev;
    if (d == 1.0) {
      a.hvac = HvacAction::inc;
    } else if (d == -1.0) {
      a.hvac = HvacAction::dec;
    } else if (d != 0.0) {
      throw DomainError("setpoint schedule jumps by " + format_double(d) + " degC");
    }
    out.push_back(a);
    prev = s;
  }
  return out;
}

HillClimbResult hill_climb_setpoint(const DataCenterConfig& cfg, const AlignedTraces& traces, std::size_t restarts,
                                    std::uint64_t seed) {
  auto cfg_ptr = std::make_shared<const DataCenterConfig>(cfg);
  auto tr_ptr = std::make_shared<const AlignedTraces>(traces);
  const SimState root = reset(cfg_ptr, tr_ptr, seed);
  const std::size_t horizon = root.horizon();
  const auto levels = setpoint_levels(cfg.hvac);
  const std::size_t nlev = levels.size();
  std::size_t ref_index = 0;
  while (levels[ref_index] != cfg.hvac.setpoint_ref) ++ref_index;

  // With ls = passthrough and bat = idle the step cost depends only on
  // (t, setpoint), so every move is scored from a table of exact single-step
  // simulations.
  std::vector<double> table(horizon * nlev);
  for (std::size_t t = 0; t < horizon; ++t) {
    for (std::size_t k = 0; k < nlev; ++k) {
      SimState s = root;
      s.t = t;
      s.setpoint = levels[k];
      table[t * nlev + k] = one_step_cost(s, kNeutral);
    }
  }

  using Schedule = std::vector<std::size_t>;  // level index per step
  auto total = [&](const Schedule& sched) {
    double sum = 0.0;
    for (std::size_t t = 0; t < horizon; ++t) sum += table[t * nlev + sched[t]];
    return sum;
  };
  auto feasible_at = [&](const Schedule& sched, std::size_t t, std::size_t k) {
    const auto prev = t == 0 ? ref_index : sched[t - 1];
    if ((k > prev ? k - prev : prev - k) > 1) return false;
    if (t + 1 < horizon) {
      const auto nxt = sched[t + 1];
      if ((k > nxt ? k - nxt : nxt - k) > 1) return false;
    }
    return true;
  };

  auto descend = [&](Schedule sched, std::vector<double>& trace) {
    double current = total(sched);
    trace.assign(1, current);
    bool improved = true;
    while (improved) {
      improved = false;
      for (std::size_t t = 0; t < horizon; ++t) {
        for (int dir : {-1, 1}) {
          const auto k = sched[t];
          if ((dir < 0 && k == 0) || (dir > 0 && k + 1 >= nlev)) continue;
          const std::size_t cand = dir < 0 ? k - 1 : k + 1;
          if (!feasible_at(sched, t, cand)) continue;
          sched[t] = cand;
          const double c = total(sched);
          if (c < current) {
            current = c;
            trace.push_back(c);
            improved = true;
            break;  // first improvement; continue with the next coordinate
          }
          sched[t] = k;
        }
      }
    }
    return sched;
  };

  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> move(-1, 1);

  HillClimbResult best;
  best.cost = std::numeric_limits<double>::infinity();
  for (std::size_t run = 0; run <= restarts; ++run) {
    Schedule start(horizon, ref_index);
    if (run > 0) {
      std::size_t prev = ref_index;
      for (std::size_t t = 0; t < horizon; ++t) {
        const int k = std::clamp(static_cast<int>(prev) + move(rng), 0, static_cast<int>(nlev) - 1);
        start[t] = static_cast<std::size_t>(k);
        prev = start[t];
      }
    }
    std::vector<double> trace;
    const Schedule sched = descend(std::move(start), trace);

    std::vector<double> setpoints(horizon);
    for (std::size_t t = 0; t < horizon; ++t) setpoints[t] = levels[sched[t]];
    const double cost = episode_cost(simulate_actions(cfg_ptr, tr_ptr, schedule_to_actions(cfg, setpoints), seed));
    if (cost < best.cost) {
      best.cost = cost;
      best.schedule = std::move(setpoints);
      best.descent = std::move(trace);
    }
  }
  best.restarts_run = restarts;
  return best;
}

AlignedTraces truncate(const AlignedTraces& traces, std::size_t steps) {
  if (steps == 0 || steps > traces.horizon) {
    throw DomainError("cannot truncate " + std::to_string(traces.horizon) + " steps to " + std::to_string(steps));
  }
  AlignedTraces out = traces;
  out.horizon = steps;
  out.weather.resize(steps);
  out.carbon_intensity.resize(steps);
  out.workload.resize(steps);
  return out;
}

}  // namespace dctwin
