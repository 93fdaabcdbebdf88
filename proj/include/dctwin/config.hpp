#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace dctwin {

// Units: watts, degC, kWh, kW and hours throughout.

struct ServerSpec {
  double idle_power = 100.0;
  double full_power = 300.0;
  double fan_ref_power = 25.0;  // fan power at flow ratio 1.0
  double fan_min_ratio = 0.3;

  bool operator==(const ServerSpec&) const = default;
};

struct CabinetSpec {
  int server_count = 20;
  double inlet_offset = 0.0;  // degC above supply air
  double airflow_ref = 1.0;   // kg/s at flow ratio 1.0

  bool operator==(const CabinetSpec&) const = default;
};

struct RoomSpec {
  int rows = 2;
  int cabinets_per_row = 4;
  std::vector<CabinetSpec> cabinets;  // row-major, rows * cabinets_per_row entries

  bool operator==(const RoomSpec&) const = default;
};

struct HvacSpec {
  double crac_ref_power = 2000.0;
  double cop_nominal = 6.0;
  double cop_ambient_slope = 0.15;
  double cop_setpoint_slope = 0.2;
  double cop_min = 2.0;
  double cop_max = 8.0;
  double ambient_ref = 15.0;
  double setpoint_ref = 22.0;
  double setpoint_min = 18.0;
  double setpoint_max = 27.0;
  double cooling_tower_ref_power = 1500.0;
  double cooling_tower_ref_load = 50000.0;  // thermal watts
  double pump_power = 500.0;

  bool operator==(const HvacSpec&) const = default;
};

struct BatterySpec {
  double capacity = 500.0;  // kWh
  double max_rate = 100.0;  // kW, both directions
  double charge_eff = 0.95;
  double discharge_eff = 0.95;
  double initial_soc_fraction = 0.5;

  bool operator==(const BatterySpec&) const = default;
};

struct LoadShiftSpec {
  double shiftable_fraction = 0.3;
  int deadline_steps = 96;
  double util_capacity = 1.0;
  double drop_penalty_weight = 1.0;

  bool operator==(const LoadShiftSpec&) const = default;
};

struct RewardSpec {
  double carbon_weight = 1.0;
  double energy_weight = 0.0;
  double penalty_weight = 0.1;
  double norm = 1000.0;

  bool operator==(const RewardSpec&) const = default;
};

struct DataCenterConfig {
  RoomSpec room;
  ServerSpec server;
  HvacSpec hvac;
  BatterySpec battery;
  LoadShiftSpec loadshift;
  RewardSpec reward;
  double timestep_hours = 0.25;

  int cabinet_count() const { return static_cast<int>(room.cabinets.size()); }
  int server_count() const;

  bool operator==(const DataCenterConfig&) const = default;
};

enum class Severity { error, warning };

struct Issue {
  std::string path;
  std::string message;
  Severity severity = Severity::error;

  bool operator==(const Issue&) const = default;
};

struct ValidationReport {
  bool ok = true;
  std::vector<Issue> issues;

  void add(Issue issue);
  std::size_t error_count() const;
};

// Inlet offsets used when a cabinet does not specify one: linspace(0, 4, n).
std::vector<double> default_inlet_offsets(int n);

DataCenterConfig default_config();

// Missing keys take the defaults above. Unknown keys are reported through
// `warnings` when given. Throws ParseError on malformed JSON and
// FieldTypeError when a known key has the wrong JSON type.
DataCenterConfig parse_config(std::string_view json_text, std::vector<Issue>* warnings = nullptr);

// Every violated invariant is listed; never throws.
ValidationReport validate_config(const DataCenterConfig& cfg);

// Compact JSON with every key present; parse_config(to_json(c)) == c.
std::string config_to_json(const DataCenterConfig& cfg, int indent = -1);

// Reads and parses a file; IoError when unreadable.
DataCenterConfig load_config_file(const std::string& path, std::vector<Issue>* warnings = nullptr);

}  // namespace dctwin
