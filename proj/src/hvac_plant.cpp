#include "dctwin/hvac_plant.hpp"

#include <algorithm>

#include "dctwin/error.hpp"
#include "dctwin/format.hpp"

namespace dctwin {

double crac_fan_power(double flow_ratio, const HvacSpec& spec) {
  if (!(flow_ratio >= 0.0 && flow_ratio <= 1.0)) {
    throw DomainError("CRAC flow ratio " + format_double(flow_ratio) + " outside [0, 1]");
  }
  return spec.crac_ref_power * flow_ratio * flow_ratio * flow_ratio;
}

double chiller_cop(double t_ambient, double setpoint, const HvacSpec& spec) {
  const double raw = spec.cop_nominal - spec.cop_ambient_slope * (t_ambient - spec.ambient_ref) +
                     spec.cop_setpoint_slope * (setpoint - spec.setpoint_ref);
  return std::clamp(raw, spec.cop_min, spec.cop_max);
}

HvacResult plant_step(double q_it, double crac_flow_ratio, double t_ambient, double setpoint, const HvacSpec& spec) {
  if (!(q_it >= 0.0)) throw DomainError("IT heat load " + format_double(q_it) + " W is negative");

  HvacResult r;
  r.crac_fan_power = crac_fan_power(crac_flow_ratio, spec);
  r.cop_effective = chiller_cop(t_ambient, setpoint, spec);
  const double load = q_it + r.crac_fan_power;
  r.chiller_power = load / r.cop_effective;
  r.cooling_tower_power =
      std::max(0.0, spec.cooling_tower_ref_power * (load + r.chiller_power) / spec.cooling_tower_ref_load);
  r.pump_power = load > 0.0 ? spec.pump_power : 0.0;
  r.total = r.crac_fan_power + r.chiller_power + r.cooling_tower_power + r.pump_power;
  return r;
}

}  // namespace dctwin
