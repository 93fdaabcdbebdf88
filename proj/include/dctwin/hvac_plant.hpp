#pragma once

#include "dctwin/config.hpp"

namespace dctwin {

struct HvacResult {
  double crac_fan_power = 0.0;  // W
  double chiller_power = 0.0;
  double cooling_tower_power = 0.0;
  double pump_power = 0.0;
  double total = 0.0;
  double cop_effective = 0.0;
};

// Fan affinity law, crac_ref_power * ratio^3. Throws DomainError outside [0, 1].
double crac_fan_power(double flow_ratio, const HvacSpec& spec);

// Linear in ambient and setpoint, clamped to [cop_min, cop_max].
double chiller_cop(double t_ambient, double setpoint, const HvacSpec& spec);

// Electrical power of the lumped plant rejecting q_it watts of IT heat plus
// the CRAC fan heat. Throws DomainError for negative q_it.
HvacResult plant_step(double q_it, double crac_flow_ratio, double t_ambient, double setpoint, const HvacSpec& spec);

}  // namespace dctwin
