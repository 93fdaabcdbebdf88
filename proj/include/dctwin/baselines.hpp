#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <random>
#include <string>
#include <vector>

#include "dctwin/env.hpp"

namespace dctwin {

// A policy over the shared observation. Implementations may keep memory,
// cleared by begin() at the start of every episode.
class Controller {
 public:
  virtual ~Controller() = default;
  virtual std::string name() const = 0;
  virtual void begin(const SimState& /*state*/) {}
  virtual AgentActions act(const Observations& obs, const SimState& state) = 0;
};

// Steers the setpoint toward a fixed target and holds it; no shifting, battery idle.
class FixedBaseline : public Controller {
 public:
  explicit FixedBaseline(double setpoint_hold = 22.0) : hold_(setpoint_hold) {}
  std::string name() const override { return "fixed"; }
  void begin(const SimState& state) override;
  AgentActions act(const Observations& obs, const SimState& state) override;

 private:
  double hold_;
};

// Rule-based carbon heuristic for all three agents. The hvac move is chosen
// by a one-step rollout on a copy of the simulator state.
class CarbonGreedy : public Controller {
 public:
  std::string name() const override { return "greedy"; }
  void begin(const SimState& state) override;
  AgentActions act(const Observations& obs, const SimState& state) override;

  // Exposed for tests: the rule layer without the rollout.
  ShiftAction shift_rule(double ci_now, double forecast_mean) const;
  BatteryAction battery_rule(double ci_now) const;
  void observe_ci(double ci_now);
  double trailing_mean() const { return seen_ ? ci_sum_ / static_cast<double>(seen_) : 0.0; }

 private:
  double ci_sum_ = 0.0;
  std::size_t seen_ = 0;
};

// Replays a precomputed action list; hold/passthrough/idle past its end.
class ScheduledController : public Controller {
 public:
  ScheduledController(std::string name, std::vector<AgentActions> plan)
      : name_(std::move(name)), plan_(std::move(plan)) {}
  std::string name() const override { return name_; }
  AgentActions act(const Observations& obs, const SimState& state) override;
  const std::vector<AgentActions>& plan() const { return plan_; }

 private:
  std::string name_;
  std::vector<AgentActions> plan_;
};

// Uniform random joint actions from the episode seed.
class RandomController : public Controller {
 public:
  std::string name() const override { return "random"; }
  void begin(const SimState& state) override;
  AgentActions act(const Observations& obs, const SimState& state) override;

 private:
  std::mt19937_64 rng_;
};

std::unique_ptr<Controller> fixed_baseline(double setpoint_hold = 22.0);
std::unique_ptr<Controller> carbon_greedy();

// Runs a full episode from reset; the returned state is done.
SimState run_controller(Controller& controller, std::shared_ptr<const DataCenterConfig> cfg,
                        std::shared_ptr<const AlignedTraces> traces, std::uint64_t seed = 0,
                        bool record_series = false);

// Simulates a fixed action list from reset and returns the finished state.
// The list length must equal the trace horizon.
SimState simulate_actions(std::shared_ptr<const DataCenterConfig> cfg, std::shared_ptr<const AlignedTraces> traces,
                          const std::vector<AgentActions>& actions, std::uint64_t seed = 0);

inline constexpr std::size_t kOracleMaxHorizon = 6;
inline constexpr std::size_t kOracleDefaultCap = 4;

struct OracleOptions {
  std::size_t horizon_cap = kOracleDefaultCap;  // at most kOracleMaxHorizon
  unsigned workers = 1;
  bool hvac_only = false;  // fix ls = passthrough and bat = idle
};

struct OracleResult {
  std::vector<AgentActions> actions;  // lexicographically smallest argmin
  double cost = 0.0;                  // -(sum of rewards)
  std::size_t evaluated = 0;          // complete sequences simulated
};

// Exhaustive search over every joint action sequence of the trace horizon.
// Throws DomainError when the horizon exceeds the cap or the cap exceeds 6.
// The result does not depend on the worker count.
OracleResult exhaustive_oracle(const DataCenterConfig& cfg, const AlignedTraces& traces, OracleOptions options = {});

struct HillClimbResult {
  std::vector<double> schedule;  // setpoint per step
  double cost = 0.0;             // full-simulation cost of the schedule
  std::vector<double> descent;   // cost after each accepted move of the winning run, start included
  std::size_t restarts_run = 0;
};

// Per-step setpoint schedule with ls = passthrough and bat = idle, optimized by
// first-improvement single-coordinate +/-1 degC moves from the fixed schedule
// (setpoint_ref everywhere) and from `restarts` seeded random schedules.
HillClimbResult hill_climb_setpoint(const DataCenterConfig& cfg, const AlignedTraces& traces, std::size_t restarts,
                                    std::uint64_t seed);

// Converts a feasible setpoint schedule (|delta| <= 1 per step, starting
// within 1 of setpoint_ref) into hvac actions with ls/bat at passthrough/idle.
std::vector<AgentActions> schedule_to_actions(const DataCenterConfig& cfg, const std::vector<double>& schedule);

// First `steps` entries of aligned traces.
AlignedTraces truncate(const AlignedTraces& traces, std::size_t steps);

}  // namespace dctwin
