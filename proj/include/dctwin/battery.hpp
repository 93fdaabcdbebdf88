#pragma once

#include "dctwin/config.hpp"

namespace dctwin {

enum class BatteryAction { charge = 0, idle = 1, discharge = 2 };

struct BatteryState {
  double soc = 0.0;  // kWh, within [0, capacity]
};

struct BatteryOutcome {
  double new_soc = 0.0;
  // Positive: extra grid draw for charging. Negative: facility draw covered by discharge.
  double grid_energy_delta = 0.0;
  bool clipped = false;
};

// Fixed-rate charge/discharge over one step of dt hours. Discharge never
// exceeds dc_load_energy (no export). Throws DomainError on negative load or dt <= 0.
BatteryOutcome battery_step(const BatteryState& state, BatteryAction action, double dc_load_energy, double dt,
                            const BatterySpec& spec);

}  // namespace dctwin
