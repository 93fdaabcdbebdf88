#include "dctwin/it_thermal.hpp"

#include <algorithm>
#include <cmath>

#include <nlohmann/json.hpp>

#include "dctwin/error.hpp"
#include "dctwin/format.hpp"

namespace dctwin {

double fan_ratio(double t_inlet, const ServerSpec& spec) {
  return std::clamp(0.3 + 0.7 * (t_inlet - 18.0) / 9.0, spec.fan_min_ratio, 1.0);
}

ServerPower server_power(double utilization, double t_inlet, const ServerSpec& spec) {
  if (!(utilization >= 0.0 && utilization <= 1.0)) {
    throw DomainError("utilization " + format_double(utilization) + " outside [0, 1]");
  }
  const double f = fan_ratio(t_inlet, spec);
  return {spec.idle_power + (spec.full_power - spec.idle_power) * utilization, spec.fan_ref_power * f * f * f};
}

ItResult room_step(const DataCenterConfig& cfg, double setpoint, double utilization) {
  const auto& h = cfg.hvac;
  if (!(setpoint >= h.setpoint_min && setpoint <= h.setpoint_max)) {
    throw DomainError("setpoint " + format_double(setpoint) + " outside [" + format_double(h.setpoint_min) + ", " +
                      format_double(h.setpoint_max) + "]");
  }

  ItResult r;
  const std::size_t n = cfg.room.cabinets.size();
  r.inlet_temps.reserve(n);
  r.outlet_temps.reserve(n);
  r.cabinet_heat.reserve(n);

  double heat_total = 0.0;
  double heat_temp = 0.0;
  double heat_ratio = 0.0;
  for (const auto& cab : cfg.room.cabinets) {
    const double t_in = setpoint + cab.inlet_offset;
    const ServerPower p = server_power(utilization, t_in, cfg.server);
    const double count = static_cast<double>(cab.server_count);
    const double cpu = count * p.cpu;
    const double fan = count * p.fan;
    const double q = cpu + fan;
    const double ratio = fan_ratio(t_in, cfg.server);
    const double mass_flow = ratio * cab.airflow_ref;
    const double t_out = t_in + q / (mass_flow * kAirSpecificHeat);

    r.cpu_power += cpu;
    r.fan_power += fan;
    r.inlet_temps.push_back(t_in);
    r.outlet_temps.push_back(t_out);
    r.cabinet_heat.push_back(q);
    heat_total += q;
    heat_temp += q * t_out;
    heat_ratio += q * ratio;
  }
  r.it_power = r.cpu_power + r.fan_power;
  // idle_power > 0 on a valid config, so heat_total > 0.
  r.return_temp = heat_temp / heat_total;
  r.crac_flow_ratio = heat_ratio / heat_total;
  return r;
}

TemperatureGrid hotspot_grid(const DataCenterConfig& cfg, const ItResult& result) {
  const int rows = cfg.room.rows;
  const int cols = cfg.room.cabinets_per_row;
  const auto expected = static_cast<std::size_t>(std::max(rows, 0)) * static_cast<std::size_t>(std::max(cols, 0));
  if (result.inlet_temps.size() != expected || result.outlet_temps.size() != expected) {
    throw DomainError("temperature lists hold " + std::to_string(result.inlet_temps.size()) + " cabinets, layout " +
                      std::to_string(rows) + "x" + std::to_string(cols) + " needs " + std::to_string(expected));
  }
  return {rows, cols, result.inlet_temps, result.outlet_temps};
}

std::string grid_to_json(const TemperatureGrid& grid) {
  nlohmann::ordered_json doc;
  doc["rows"] = grid.rows;
  doc["cols"] = grid.cols;
  doc["inlet"] = grid.inlet;
  doc["outlet"] = grid.outlet;
  return doc.dump();
}

std::string grid_to_csv(const TemperatureGrid& grid, GridField field) {
  const auto& values = field == GridField::inlet ? grid.inlet : grid.outlet;
  std::string out;
  for (int r = 0; r < grid.rows; ++r) {
    for (int c = 0; c < grid.cols; ++c) {
      if (c) out += ',';
      out += format_double(values[static_cast<std::size_t>(r * grid.cols + c)]);
    }
    out += '\n';
  }
  return out;
}

}  // namespace dctwin
