#include "dctwin/battery.hpp"

#include <algorithm>

#include "dctwin/error.hpp"

namespace dctwin {

BatteryOutcome battery_step(const BatteryState& state, BatteryAction action, double dc_load_energy, double dt,
                            const BatterySpec& spec) {
  if (!(dc_load_energy >= 0.0)) throw DomainError("facility load energy must be >= 0");
  if (!(dt > 0.0)) throw DomainError("dt must be > 0");

  const double soc = std::clamp(state.soc, 0.0, spec.capacity);
  BatteryOutcome out{soc, 0.0, false};

  switch (action) {
    case BatteryAction::idle:
      break;

    case BatteryAction::charge: {
      // The rate limit applies at the grid terminal.
      const double by_rate = spec.max_rate * dt * spec.charge_eff;
      const double headroom = spec.capacity - soc;
      const double stored = std::min(by_rate, headroom);
      out.clipped = headroom < by_rate;
      out.grid_energy_delta = stored / spec.charge_eff;
      out.new_soc = std::min(soc + stored, spec.capacity);
      break;
    }

    case BatteryAction::discharge: {
      const double by_rate = spec.max_rate * dt / spec.discharge_eff;
      const double withdrawable = std::min(soc, by_rate);
      double delivered = withdrawable * spec.discharge_eff;
      out.clipped = soc < by_rate;
      if (delivered > dc_load_energy) {
        delivered = dc_load_energy;
        out.clipped = true;
      }
      out.grid_energy_delta = delivered > 0.0 ? -delivered : 0.0;
      out.new_soc = std::max(soc - delivered / spec.discharge_eff, 0.0);
      break;
    }
  }
  return out;
}

}  // namespace dctwin
