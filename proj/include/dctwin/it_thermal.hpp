#pragma once

#include <vector>

#include "dctwin/config.hpp"

namespace dctwin {

inline constexpr double kAirSpecificHeat = 1005.0;  // J/(kg K)

struct ServerPower {
  double cpu = 0.0;  // W
  double fan = 0.0;  // W
};

struct ItResult {
  double it_power = 0.0;  // cpu_power + fan_power, W
  double cpu_power = 0.0;
  double fan_power = 0.0;
  std::vector<double> inlet_temps;   // degC per cabinet
  std::vector<double> outlet_temps;  // degC per cabinet
  std::vector<double> cabinet_heat;  // W per cabinet
  double return_temp = 0.0;          // heat-weighted mean outlet
  double crac_flow_ratio = 0.0;      // heat-weighted mean server fan ratio
};

struct TemperatureGrid {
  int rows = 0;
  int cols = 0;
  std::vector<double> inlet;   // row-major
  std::vector<double> outlet;  // row-major

  double inlet_at(int r, int c) const { return inlet[static_cast<std::size_t>(r * cols + c)]; }
  double outlet_at(int r, int c) const { return outlet[static_cast<std::size_t>(r * cols + c)]; }
};

// Server fan flow ratio: linear 0.3 -> 1.0 across 18..27 degC inlet, floored at fan_min_ratio.
double fan_ratio(double t_inlet, const ServerSpec& spec);

// Throws DomainError when utilization is outside [0, 1].
ServerPower server_power(double utilization, double t_inlet, const ServerSpec& spec);

// Steady-state room response to a supply setpoint and uniform utilization.
ItResult room_step(const DataCenterConfig& cfg, double setpoint, double utilization);

TemperatureGrid hotspot_grid(const DataCenterConfig& cfg, const ItResult& result);

std::string grid_to_json(const TemperatureGrid& grid);

enum class GridField { inlet, outlet };
// One grid row per line, comma separated, row-major.
std::string grid_to_csv(const TemperatureGrid& grid, GridField field);

}  // namespace dctwin
