#include "dctwin/env.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "dctwin/error.hpp"
#include "dctwin/format.hpp"
#include "dctwin/hvac_plant.hpp"

namespace dctwin {

namespace {

std::size_t clamp_index(const AlignedTraces& tr, std::size_t t) { return std::min(t, tr.horizon - 1); }

double hour_of_day(const AlignedTraces& tr, std::size_t t) {
  const auto step_s = std::llround(tr.step_hours * 3600.0);
  const auto since_epoch = tr.start.time_since_epoch().count() + static_cast<long long>(t) * step_s;
  const auto in_day = ((since_epoch % 86400) + 86400) % 86400;
  return static_cast<double>(in_day) / 3600.0;
}

double reward_of(const RewardSpec& w, double carbon_kg, double grid_energy_kwh, double penalty) {
  const double r = -(w.carbon_weight * carbon_kg + w.energy_weight * grid_energy_kwh) / w.norm - w.penalty_weight * penalty;
  return r == 0.0 ? 0.0 : r;  // no "-0.0" in reports
}

}  // namespace

int encode(const AgentActions& a) {
  return static_cast<int>(a.ls) * 9 + static_cast<int>(a.hvac) * 3 + static_cast<int>(a.bat);
}

AgentActions decode(int joint) {
  if (joint < 0 || joint >= kJointActionCount) {
    throw DomainError("joint action " + std::to_string(joint) + " outside [0, 27)");
  }
  return {static_cast<ShiftAction>(joint / 9), static_cast<HvacAction>((joint / 3) % 3),
          static_cast<BatteryAction>(joint % 3)};
}

AgentActions actions_from_indices(int ls, int hvac, int bat) {
  auto check = [](int v, std::string_view agent) {
    if (v < 0 || v > 2) {
      throw DomainError("action " + std::to_string(v) + " for agent '" + std::string(agent) + "' outside {0, 1, 2}");
    }
  };
  check(ls, kAgentNames[0]);
  check(hvac, kAgentNames[1]);
  check(bat, kAgentNames[2]);
  return {static_cast<ShiftAction>(ls), static_cast<HvacAction>(hvac), static_cast<BatteryAction>(bat)};
}

std::string to_string(const AgentActions& a) {
  static constexpr std::array<std::string_view, 3> ls{"store", "passthrough", "release"};
  static constexpr std::array<std::string_view, 3> hv{"dec", "hold", "inc"};
  static constexpr std::array<std::string_view, 3> bt{"charge", "idle", "discharge"};
  std::string out;
  out += ls[static_cast<std::size_t>(a.ls)];
  out += '/';
  out += hv[static_cast<std::size_t>(a.hvac)];
  out += '/';
  out += bt[static_cast<std::size_t>(a.bat)];
  return out;
}

ObservationBounds observation_bounds() {
  constexpr double inf = std::numeric_limits<double>::infinity();
  ObservationBounds b;
  b.low.fill(0.0);
  b.high.fill(inf);
  b.low[obs::hour_sin] = b.low[obs::hour_cos] = -1.0;
  b.high[obs::hour_sin] = b.high[obs::hour_cos] = 1.0;
  b.low[obs::ambient] = -inf;
  b.high[obs::base_util] = 1.0;
  b.high[obs::soc_fraction] = 1.0;
  b.high[obs::setpoint_norm] = 1.0;
  b.high[obs::time_remaining] = 1.0;
  for (std::size_t i = 0; i < kAgentCount; ++i) b.high[obs::agent_one_hot + i] = 1.0;
  return b;
}

SimState reset(std::shared_ptr<const DataCenterConfig> cfg, std::shared_ptr<const AlignedTraces> traces,
               std::uint64_t seed, bool record_series) {
  if (!cfg || !traces) throw StateError("reset needs a config and traces");
  const auto report = validate_config(*cfg);
  if (!report.ok) {
    const auto& first = *std::find_if(report.issues.begin(), report.issues.end(),
                                      [](const Issue& i) { return i.severity == Severity::error; });
    throw ValidationError("invalid config: " + first.path + ": " + first.message + " (" +
                          std::to_string(report.error_count()) + " error(s))");
  }
  if (traces->step_hours != cfg->timestep_hours) {
    throw AlignError("trace step " + format_double(traces->step_hours) + " h differs from config timestep " +
                     format_double(cfg->timestep_hours) + " h");
  }
  if (traces->horizon == 0 || traces->weather.size() != traces->horizon ||
      traces->carbon_intensity.size() != traces->horizon || traces->workload.size() != traces->horizon) {
    throw AlignError("aligned traces are empty or have unequal lengths");
  }

  SimState s;
  s.cfg = std::move(cfg);
  s.traces = std::move(traces);
  s.t = 0;
  s.setpoint = s.cfg->hvac.setpoint_ref;
  s.battery.soc = s.cfg->battery.initial_soc_fraction * s.cfg->battery.capacity;
  s.rng_seed = seed;
  s.cumulative.record_series = record_series;
  return s;
}

SimState reset(const DataCenterConfig& cfg, const AlignedTraces& traces, std::uint64_t seed, bool record_series) {
  return reset(std::make_shared<const DataCenterConfig>(cfg), std::make_shared<const AlignedTraces>(traces), seed,
               record_series);
}

Observations observe(const SimState& state) {
  const auto& cfg = *state.cfg;
  const auto& tr = *state.traces;
  const std::size_t i = clamp_index(tr, state.t);

  Observation base{};
  const double hour = hour_of_day(tr, state.t);
  base[obs::hour_sin] = std::sin(2.0 * std::numbers::pi * hour / 24.0);
  base[obs::hour_cos] = std::cos(2.0 * std::numbers::pi * hour / 24.0);
  base[obs::ambient] = tr.weather[i];
  base[obs::ci_now] = tr.carbon_intensity[i];
  for (std::size_t k = 0; k < obs::forecast_steps; ++k) {
    base[obs::ci_forecast + k] = tr.carbon_intensity[clamp_index(tr, state.t + k + 1)];
  }
  base[obs::base_util] = tr.workload[i];
  base[obs::queued_total] = state.queue.total();
  base[obs::soc_fraction] = state.battery.soc / cfg.battery.capacity;
  base[obs::setpoint_norm] =
      (state.setpoint - cfg.hvac.setpoint_min) / (cfg.hvac.setpoint_max - cfg.hvac.setpoint_min);
  base[obs::last_it_kw] = state.last_it_kw;
  base[obs::last_total_kw] = state.last_total_kw;
  base[obs::time_remaining] =
      static_cast<double>(tr.horizon - std::min(state.t, tr.horizon)) / static_cast<double>(tr.horizon);

  Observations out;
  for (std::size_t a = 0; a < kAgentCount; ++a) {
    out[a] = base;
    out[a][obs::agent_one_hot + a] = 1.0;
  }
  return out;
}

StepResult step(SimState& state, const AgentActions& actions) {
  if (state.done()) throw StateError("step called after the episode finished");
  const auto& cfg = *state.cfg;
  const auto& tr = *state.traces;
  const std::size_t t = state.t;
  const double dt = cfg.timestep_hours;

  StepResult r;
  r.t = t;

  // (1) setpoint
  const double delta = actions.hvac == HvacAction::dec ? -1.0 : actions.hvac == HvacAction::inc ? 1.0 : 0.0;
  state.setpoint = std::clamp(state.setpoint + delta, cfg.hvac.setpoint_min, cfg.hvac.setpoint_max);
  r.setpoint = state.setpoint;

  // (2) load shift
  r.shift = apply_action(state.queue, tr.workload[t], actions.ls, t, cfg.loadshift);
  state.queue = r.shift.new_queue;

  // (3) IT and (4) plant
  const ItResult it = room_step(cfg, state.setpoint, r.shift.effective_util);
  const HvacResult plant = plant_step(it.it_power, it.crac_flow_ratio, tr.weather[t], state.setpoint, cfg.hvac);
  r.hotspot = hotspot_grid(cfg, it);
  r.it_power_kw = it.it_power / 1000.0;
  r.hvac_power_kw = plant.total / 1000.0;
  r.it_energy_kwh = it.it_power * dt / 1000.0;
  r.hvac_energy_kwh = plant.total * dt / 1000.0;

  // (5) battery
  const double dc_load_energy = (it.it_power + plant.total) * dt / 1000.0;
  r.battery_outcome = battery_step(state.battery, actions.bat, dc_load_energy, dt, cfg.battery);
  state.battery.soc = r.battery_outcome.new_soc;
  r.grid_energy_kwh = dc_load_energy + r.battery_outcome.grid_energy_delta;
  r.penalty = r.shift.penalty;

  // (8, part) the last step settles the queue in one synthetic step that
  // repeats the final base load; its marginal energy is billed here.
  state.t = t + 1;
  r.done = state.t == tr.horizon;
  if (r.done && !state.queue.empty()) {
    const double base = tr.workload[t];
    const FlushOutcome fl = flush(state.queue, {base}, cfg.loadshift);
    r.settled_work = fl.forced.front();
    r.settled_dropped = fl.dropped;
    r.penalty += fl.penalty;
    state.queue = ShiftQueue{};
    if (r.settled_work > 0.0) {
      const ItResult it0 = room_step(cfg, state.setpoint, base);
      const ItResult it1 = room_step(cfg, state.setpoint, std::min(base + r.settled_work, 1.0));
      const HvacResult p0 = plant_step(it0.it_power, it0.crac_flow_ratio, tr.weather[t], state.setpoint, cfg.hvac);
      const HvacResult p1 = plant_step(it1.it_power, it1.crac_flow_ratio, tr.weather[t], state.setpoint, cfg.hvac);
      const double extra_it = (it1.it_power - it0.it_power) * dt / 1000.0;
      const double extra_hvac = (p1.total - p0.total) * dt / 1000.0;
      r.it_energy_kwh += extra_it;
      r.hvac_energy_kwh += extra_hvac;
      r.grid_energy_kwh += extra_it + extra_hvac;
    }
  }

  // (6) carbon, (7) shared reward
  const double ci = tr.carbon_intensity[t];
  r.carbon_kg = r.grid_energy_kwh * ci / 1000.0;
  const double reward = reward_of(cfg.reward, r.carbon_kg, r.grid_energy_kwh, r.penalty);
  r.rewards.fill(reward);

  state.last_it_kw = r.it_power_kw;
  state.last_total_kw = r.it_power_kw + r.hvac_power_kw;

  auto& acc = state.cumulative;
  acc.steps += 1;
  acc.total_energy_kwh += r.grid_energy_kwh;
  acc.it_energy_kwh += r.it_energy_kwh;
  acc.hvac_energy_kwh += r.hvac_energy_kwh;
  acc.battery_charge_kwh += std::max(r.battery_outcome.grid_energy_delta, 0.0);
  acc.battery_discharge_kwh += std::max(-r.battery_outcome.grid_energy_delta, 0.0);
  acc.carbon_kg += r.carbon_kg;
  acc.total_penalty += r.penalty;
  acc.total_reward += reward;
  acc.work_base += r.shift.base_util;
  acc.work_executed += r.shift.effective_util + r.settled_work;
  acc.work_dropped += r.shift.dropped + r.settled_dropped;
  if (acc.record_series) {
    acc.series.push_back({t, state.setpoint, tr.weather[t], ci, r.shift.base_util, r.shift.effective_util,
                          r.it_power_kw, r.hvac_power_kw, r.grid_energy_kwh, r.carbon_kg, state.battery.soc,
                          state.queue.total(), r.penalty, reward});
  }

  r.observations = observe(state);
  return r;
}

EpisodeReport episode_metrics(const SimState& state) {
  if (!state.done()) {
    throw StateError("episode metrics requested at step " + std::to_string(state.t) + " of " +
                     std::to_string(state.horizon()));
  }
  const auto& a = state.cumulative;
  EpisodeReport rep;
  rep.steps = a.steps;
  rep.total_energy_kwh = a.total_energy_kwh;
  rep.it_energy_kwh = a.it_energy_kwh;
  rep.hvac_energy_kwh = a.hvac_energy_kwh;
  rep.battery_charge_kwh = a.battery_charge_kwh;
  rep.battery_discharge_kwh = a.battery_discharge_kwh;
  rep.battery_throughput_kwh = a.battery_charge_kwh + a.battery_discharge_kwh;
  rep.carbon_kg = a.carbon_kg;
  rep.total_penalty = a.total_penalty;
  rep.total_reward = a.total_reward;
  rep.avg_pue = (a.it_energy_kwh + a.hvac_energy_kwh) / a.it_energy_kwh;
  rep.work_base = a.work_base;
  rep.work_executed = a.work_executed;
  rep.work_dropped = a.work_dropped;
  rep.series = a.series;
  return rep;
}

Environment::Environment(DataCenterConfig cfg, AlignedTraces traces, std::uint64_t seed)
    : cfg_(std::make_shared<const DataCenterConfig>(std::move(cfg))),
      traces_(std::make_shared<const AlignedTraces>(std::move(traces))),
      seed_(seed),
      state_(dctwin::reset(cfg_, traces_, seed)) {}

Observations Environment::reset() { return reset(seed_); }

Observations Environment::reset(std::uint64_t seed) {
  seed_ = seed;
  state_ = dctwin::reset(cfg_, traces_, seed);
  return observe(state_);
}

StepResult Environment::step(const AgentActions& actions) { return dctwin::step(state_, actions); }

StepResult Environment::step(const std::array<int, kAgentCount>& actions) {
  return dctwin::step(state_, actions_from_indices(actions[0], actions[1], actions[2]));
}

}  // namespace dctwin
