#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "dctwin/battery.hpp"
#include "dctwin/config.hpp"
#include "dctwin/it_thermal.hpp"
#include "dctwin/loadshift.hpp"
#include "dctwin/traces.hpp"

namespace dctwin {

enum class HvacAction { dec = 0, hold = 1, inc = 2 };

// Joint action of the three agents, one discrete choice each.
struct AgentActions {
  ShiftAction ls = ShiftAction::passthrough;
  HvacAction hvac = HvacAction::hold;
  BatteryAction bat = BatteryAction::idle;

  bool operator==(const AgentActions&) const = default;
};

inline constexpr int kJointActionCount = 27;

// Lexicographic joint encoding: ls * 9 + hvac * 3 + bat, each field in
// declaration order (store < passthrough < release, dec < hold < inc,
// charge < idle < discharge).
int encode(const AgentActions& a);
AgentActions decode(int joint);
// Per-agent discrete indices {ls, hvac, bat}; throws DomainError outside {0, 1, 2}.
AgentActions actions_from_indices(int ls, int hvac, int bat);

std::string to_string(const AgentActions& a);

enum class Agent { ls = 0, hvac = 1, bat = 2 };
inline constexpr std::size_t kAgentCount = 3;
inline constexpr std::array<std::string_view, kAgentCount> kAgentNames{"ls", "hvac", "bat"};

inline constexpr std::size_t kObservationSize = 18;
using Observation = std::array<double, kObservationSize>;
using Observations = std::array<Observation, kAgentCount>;

// Observation layout.
namespace obs {
inline constexpr std::size_t hour_sin = 0;
inline constexpr std::size_t hour_cos = 1;
inline constexpr std::size_t ambient = 2;
inline constexpr std::size_t ci_now = 3;
inline constexpr std::size_t ci_forecast = 4;  // four entries, 4..7
inline constexpr std::size_t base_util = 8;
inline constexpr std::size_t queued_total = 9;
inline constexpr std::size_t soc_fraction = 10;
inline constexpr std::size_t setpoint_norm = 11;
inline constexpr std::size_t last_it_kw = 12;
inline constexpr std::size_t last_total_kw = 13;
inline constexpr std::size_t time_remaining = 14;
inline constexpr std::size_t agent_one_hot = 15;  // three entries, 15..17
inline constexpr std::size_t forecast_steps = 4;
}  // namespace obs

struct ObservationBounds {
  Observation low;
  Observation high;
};
ObservationBounds observation_bounds();

// One row of the optional per-step series.
struct StepRecord {
  std::size_t t = 0;
  double setpoint = 0.0;
  double ambient = 0.0;
  double ci = 0.0;
  double base_util = 0.0;
  double effective_util = 0.0;
  double it_power_kw = 0.0;
  double hvac_power_kw = 0.0;
  double grid_energy_kwh = 0.0;
  double carbon_kg = 0.0;
  double soc_kwh = 0.0;
  double queued = 0.0;
  double penalty = 0.0;
  double reward = 0.0;

  bool operator==(const StepRecord&) const = default;
};

struct EpisodeAccumulator {
  std::size_t steps = 0;
  double total_energy_kwh = 0.0;  // grid energy
  double it_energy_kwh = 0.0;
  double hvac_energy_kwh = 0.0;
  double battery_charge_kwh = 0.0;     // grid energy drawn to charge
  double battery_discharge_kwh = 0.0;  // facility energy covered by discharge
  double carbon_kg = 0.0;
  double total_penalty = 0.0;
  double total_reward = 0.0;
  double work_base = 0.0;      // sum of base utilization
  double work_executed = 0.0;  // sum of effective utilization plus settled work
  double work_dropped = 0.0;
  bool record_series = false;
  std::vector<StepRecord> series;

  bool operator==(const EpisodeAccumulator&) const = default;
};

struct EpisodeReport {
  std::string controller;
  std::size_t steps = 0;
  double total_energy_kwh = 0.0;
  double it_energy_kwh = 0.0;
  double hvac_energy_kwh = 0.0;
  double battery_charge_kwh = 0.0;
  double battery_discharge_kwh = 0.0;
  double battery_throughput_kwh = 0.0;
  double carbon_kg = 0.0;
  double total_penalty = 0.0;
  double total_reward = 0.0;
  double avg_pue = 0.0;
  double work_base = 0.0;
  double work_executed = 0.0;
  double work_dropped = 0.0;
  std::vector<StepRecord> series;

  bool operator==(const EpisodeReport&) const = default;
};

struct SimState {
  std::shared_ptr<const DataCenterConfig> cfg;
  std::shared_ptr<const AlignedTraces> traces;
  std::size_t t = 0;
  double setpoint = 0.0;
  BatteryState battery;
  ShiftQueue queue;
  EpisodeAccumulator cumulative;
  std::uint64_t rng_seed = 0;
  double last_it_kw = 0.0;
  double last_total_kw = 0.0;

  std::size_t horizon() const { return traces->horizon; }
  bool done() const { return t >= traces->horizon; }
};

struct StepResult {
  std::size_t t = 0;  // index of the step just simulated
  double setpoint = 0.0;
  double it_power_kw = 0.0;
  double hvac_power_kw = 0.0;
  double it_energy_kwh = 0.0;    // includes end-of-episode settlement work
  double hvac_energy_kwh = 0.0;  // includes end-of-episode settlement work
  double grid_energy_kwh = 0.0;
  double carbon_kg = 0.0;
  double penalty = 0.0;
  std::array<double, kAgentCount> rewards{};
  bool done = false;
  TemperatureGrid hotspot;
  ShiftOutcome shift;
  BatteryOutcome battery_outcome;
  double settled_work = 0.0;   // queued work executed by the final settlement
  double settled_dropped = 0.0;
  Observations observations{};  // observations after the step
};

// Throws ValidationError for an invalid config and AlignError when the trace
// step differs from cfg.timestep_hours.
SimState reset(std::shared_ptr<const DataCenterConfig> cfg, std::shared_ptr<const AlignedTraces> traces,
               std::uint64_t seed, bool record_series = false);
SimState reset(const DataCenterConfig& cfg, const AlignedTraces& traces, std::uint64_t seed,
               bool record_series = false);

// Advances one step in the fixed order: setpoint, load shift, IT, plant,
// battery, carbon, reward, clock (with settlement on the last step).
// Throws StateError once the episode is done.
StepResult step(SimState& state, const AgentActions& actions);

Observations observe(const SimState& state);

// Throws StateError before the episode is done.
EpisodeReport episode_metrics(const SimState& state);

// Total episode cost as minimized by the optimizers: -(sum of shared rewards).
inline double episode_cost(const SimState& state) { return -state.cumulative.total_reward; }

// Stateful wrapper with a gym-like reset/step surface over the free functions.
class Environment {
 public:
  Environment(DataCenterConfig cfg, AlignedTraces traces, std::uint64_t seed = 0);

  Observations reset();
  Observations reset(std::uint64_t seed);
  StepResult step(const AgentActions& actions);
  // Per-agent discrete actions in kAgentNames order.
  StepResult step(const std::array<int, kAgentCount>& actions);

  const SimState& state() const { return state_; }
  bool done() const { return state_.done(); }
  EpisodeReport report() const { return episode_metrics(state_); }

 private:
  std::shared_ptr<const DataCenterConfig> cfg_;
  std::shared_ptr<const AlignedTraces> traces_;
  std::uint64_t seed_;
  SimState state_;
};

}  // namespace dctwin
