#include "dctwin/config.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

#include "dctwin/error.hpp"

namespace dctwin {

using nlohmann::json;

namespace {

class ObjectReader {
 public:
  ObjectReader(const json& obj, std::string path, std::vector<Issue>* warnings)
      : obj_(obj), path_(std::move(path)), warnings_(warnings) {}

  ~ObjectReader() = default;

  std::string child(const std::string& key) const { return path_.empty() ? key : path_ + "." + key; }

  const json* find(const std::string& key) {
    seen_.insert(key);
    auto it = obj_.find(key);
    return it == obj_.end() ? nullptr : &*it;
  }

  void real(const std::string& key, double& out) {
    if (const json* v = find(key)) {
      if (!v->is_number()) throw FieldTypeError(child(key), "number");
      out = v->get<double>();
    }
  }

  void integer(const std::string& key, int& out) {
    if (const json* v = find(key)) {
      // Integral floats such as 48.0 are accepted; anything outside int range is not.
      const double d = v->is_number() ? v->get<double>() : 0.5;
      if (!v->is_number() || std::floor(d) != d || d < std::numeric_limits<int>::min() ||
          d > std::numeric_limits<int>::max()) {
        throw FieldTypeError(child(key), "integer");
      }
      out = static_cast<int>(d);
    }
  }

  // Returns nullptr when absent; throws when present but not an object.
  const json* object(const std::string& key) {
    const json* v = find(key);
    if (v && !v->is_object()) throw FieldTypeError(child(key), "object");
    return v;
  }

  void warn_unknown() const {
    if (!warnings_) return;
    for (auto it = obj_.begin(); it != obj_.end(); ++it) {
      if (!seen_.count(it.key())) {
        warnings_->push_back({child(it.key()), "unknown key ignored", Severity::warning});
      }
    }
  }

 private:
  const json& obj_;
  std::string path_;
  std::vector<Issue>* warnings_;
  std::set<std::string> seen_;
};

void read_server(ObjectReader& r, ServerSpec& s) {
  r.real("idle_power", s.idle_power);
  r.real("full_power", s.full_power);
  r.real("fan_ref_power", s.fan_ref_power);
  r.real("fan_min_ratio", s.fan_min_ratio);
}

void read_hvac(ObjectReader& r, HvacSpec& h) {
  r.real("crac_ref_power", h.crac_ref_power);
  r.real("cop_nominal", h.cop_nominal);
  r.real("cop_ambient_slope", h.cop_ambient_slope);
  r.real("cop_setpoint_slope", h.cop_setpoint_slope);
  r.real("cop_min", h.cop_min);
  r.real("cop_max", h.cop_max);
  r.real("ambient_ref", h.ambient_ref);
  r.real("setpoint_ref", h.setpoint_ref);
  r.real("setpoint_min", h.setpoint_min);
  r.real("setpoint_max", h.setpoint_max);
  r.real("cooling_tower_ref_power", h.cooling_tower_ref_power);
  r.real("cooling_tower_ref_load", h.cooling_tower_ref_load);
  r.real("pump_power", h.pump_power);
}

void read_battery(ObjectReader& r, BatterySpec& b) {
  r.real("capacity", b.capacity);
  r.real("max_rate", b.max_rate);
  r.real("charge_eff", b.charge_eff);
  r.real("discharge_eff", b.discharge_eff);
  r.real("initial_soc_fraction", b.initial_soc_fraction);
}

void read_loadshift(ObjectReader& r, LoadShiftSpec& l) {
  r.real("shiftable_fraction", l.shiftable_fraction);
  r.integer("deadline_steps", l.deadline_steps);
  r.real("util_capacity", l.util_capacity);
  r.real("drop_penalty_weight", l.drop_penalty_weight);
}

void read_reward(ObjectReader& r, RewardSpec& w) {
  r.real("carbon_weight", w.carbon_weight);
  r.real("energy_weight", w.energy_weight);
  r.real("penalty_weight", w.penalty_weight);
  r.real("norm", w.norm);
}

void read_room(ObjectReader& r, RoomSpec& room, std::vector<Issue>* warnings) {
  r.integer("rows", room.rows);
  r.integer("cabinets_per_row", room.cabinets_per_row);

  const json* list = r.find("cabinets");
  if (!list) {
    const int n = std::max(room.rows, 0) * std::max(room.cabinets_per_row, 0);
    const auto offsets = default_inlet_offsets(n);
    room.cabinets.assign(static_cast<std::size_t>(n), CabinetSpec{});
    for (int i = 0; i < n; ++i) room.cabinets[static_cast<std::size_t>(i)].inlet_offset = offsets[static_cast<std::size_t>(i)];
    return;
  }
  if (!list->is_array()) throw FieldTypeError(r.child("cabinets"), "array");

  const auto offsets = default_inlet_offsets(static_cast<int>(list->size()));
  room.cabinets.clear();
  for (std::size_t i = 0; i < list->size(); ++i) {
    const std::string path = r.child("cabinets") + "[" + std::to_string(i) + "]";
    const json& item = (*list)[i];
    if (!item.is_object()) throw FieldTypeError(path, "object");
    CabinetSpec cab;
    cab.inlet_offset = offsets[i];
    ObjectReader cr(item, path, warnings);
    cr.integer("server_count", cab.server_count);
    cr.real("inlet_offset", cab.inlet_offset);
    cr.real("airflow_ref", cab.airflow_ref);
    cr.warn_unknown();
    room.cabinets.push_back(cab);
  }
}

template <typename Spec, typename Fn>
void read_section(ObjectReader& root, const std::string& key, Spec& spec, std::vector<Issue>* warnings,
                  Fn fn) {
  if (const json* obj = root.object(key)) {
    ObjectReader r(*obj, key, warnings);
    fn(r, spec);
    r.warn_unknown();
  }
}

}  // namespace

int DataCenterConfig::server_count() const {
  int total = 0;
  for (const auto& c : room.cabinets) total += c.server_count;
  return total;
}

void ValidationReport::add(Issue issue) {
  if (issue.severity == Severity::error) ok = false;
  issues.push_back(std::move(issue));
}

std::size_t ValidationReport::error_count() const {
  std::size_t n = 0;
  for (const auto& i : issues) n += i.severity == Severity::error;
  return n;
}

std::vector<double> default_inlet_offsets(int n) {
  std::vector<double> out;
  if (n <= 0) return out;
  out.reserve(static_cast<std::size_t>(n));
  if (n == 1) {
    out.push_back(0.0);
    return out;
  }
  for (int i = 0; i < n; ++i) out.push_back(4.0 * i / (n - 1));
  return out;
}

DataCenterConfig default_config() {
  DataCenterConfig cfg;
  const int n = cfg.room.rows * cfg.room.cabinets_per_row;
  const auto offsets = default_inlet_offsets(n);
  for (double off : offsets) {
    CabinetSpec cab;
    cab.inlet_offset = off;
    cfg.room.cabinets.push_back(cab);
  }
  return cfg;
}

DataCenterConfig parse_config(std::string_view json_text, std::vector<Issue>* warnings) {
  json doc;
  try {
    doc = json::parse(json_text.begin(), json_text.end());
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("malformed JSON at byte ") + std::to_string(e.byte) + ": " + e.what(), e.byte);
  }
  if (!doc.is_object()) throw FieldTypeError("<root>", "object");

  DataCenterConfig cfg;
  ObjectReader root(doc, "", warnings);

  if (const json* room = root.object("room")) {
    ObjectReader r(*room, "room", warnings);
    read_room(r, cfg.room, warnings);
    r.warn_unknown();
  } else {
    ObjectReader r(json::object(), "room", nullptr);
    read_room(r, cfg.room, nullptr);
  }
  read_section(root, "server", cfg.server, warnings, read_server);
  read_section(root, "hvac", cfg.hvac, warnings, read_hvac);
  read_section(root, "battery", cfg.battery, warnings, read_battery);
  read_section(root, "loadshift", cfg.loadshift, warnings, read_loadshift);
  read_section(root, "reward", cfg.reward, warnings, read_reward);
  root.real("timestep_hours", cfg.timestep_hours);
  root.warn_unknown();
  return cfg;
}

ValidationReport validate_config(const DataCenterConfig& cfg) {
  ValidationReport rep;
  auto check = [&rep](bool cond, const std::string& path, const std::string& msg) {
    if (!cond) rep.add({path, msg, Severity::error});
  };

  const auto& s = cfg.server;
  check(0.0 < s.idle_power && s.idle_power < s.full_power, "server", "0 < idle_power < full_power violated");
  check(s.fan_ref_power >= 0.0, "server.fan_ref_power", "must be >= 0");
  check(s.fan_min_ratio > 0.0 && s.fan_min_ratio <= 1.0, "server.fan_min_ratio", "must be in (0, 1]");

  const auto& room = cfg.room;
  check(room.rows >= 1, "room.rows", "must be >= 1");
  check(room.cabinets_per_row >= 1, "room.cabinets_per_row", "must be >= 1");
  // Only meaningful once both dimensions are sane.
  if (room.rows >= 1 && room.cabinets_per_row >= 1) {
    const auto expected = static_cast<std::size_t>(room.rows) * static_cast<std::size_t>(room.cabinets_per_row);
    check(room.cabinets.size() == expected, "room.cabinets",
          "length " + std::to_string(room.cabinets.size()) + " != rows * cabinets_per_row = " +
              std::to_string(expected));
  }
  for (std::size_t i = 0; i < room.cabinets.size(); ++i) {
    const auto& c = room.cabinets[i];
    const std::string p = "room.cabinets[" + std::to_string(i) + "]";
    check(c.server_count >= 1, p + ".server_count", "must be >= 1");
    check(c.inlet_offset >= 0.0, p + ".inlet_offset", "must be >= 0");
    check(c.airflow_ref > 0.0, p + ".airflow_ref", "must be > 0");
  }

  const auto& h = cfg.hvac;
  check(0.0 < h.cop_min && h.cop_min <= h.cop_nominal && h.cop_nominal <= h.cop_max, "hvac",
        "0 < cop_min <= cop_nominal <= cop_max violated");
  const bool range_ok = h.setpoint_min < h.setpoint_max;
  check(range_ok, "hvac", "setpoint_min < setpoint_max violated");
  if (range_ok) {
    check(h.setpoint_min <= h.setpoint_ref && h.setpoint_ref <= h.setpoint_max, "hvac",
          "setpoint_ref outside [setpoint_min, setpoint_max]");
  }
  check(h.cop_ambient_slope >= 0.0, "hvac.cop_ambient_slope", "must be >= 0");
  check(h.cop_setpoint_slope >= 0.0, "hvac.cop_setpoint_slope", "must be >= 0");
  check(h.crac_ref_power >= 0.0, "hvac.crac_ref_power", "must be >= 0");
  check(h.cooling_tower_ref_power >= 0.0, "hvac.cooling_tower_ref_power", "must be >= 0");
  check(h.cooling_tower_ref_load > 0.0, "hvac.cooling_tower_ref_load", "must be > 0");
  check(h.pump_power >= 0.0, "hvac.pump_power", "must be >= 0");

  const auto& b = cfg.battery;
  check(b.capacity > 0.0, "battery.capacity", "must be > 0");
  check(b.max_rate > 0.0, "battery.max_rate", "must be > 0");
  check(b.charge_eff > 0.0 && b.charge_eff <= 1.0, "battery.charge_eff", "must be in (0, 1]");
  check(b.discharge_eff > 0.0 && b.discharge_eff <= 1.0, "battery.discharge_eff", "must be in (0, 1]");
  check(b.initial_soc_fraction >= 0.0 && b.initial_soc_fraction <= 1.0, "battery.initial_soc_fraction",
        "must be in [0, 1]");

  const auto& l = cfg.loadshift;
  check(l.shiftable_fraction >= 0.0 && l.shiftable_fraction < 1.0, "loadshift.shiftable_fraction",
        "must be in [0, 1)");
  check(l.deadline_steps >= 1, "loadshift.deadline_steps", "must be >= 1");
  check(l.util_capacity > 0.0 && l.util_capacity <= 1.0, "loadshift.util_capacity", "must be in (0, 1]");
  check(l.drop_penalty_weight >= 0.0, "loadshift.drop_penalty_weight", "must be >= 0");

  const auto& w = cfg.reward;
  check(w.carbon_weight >= 0.0, "reward.carbon_weight", "must be >= 0");
  check(w.energy_weight >= 0.0, "reward.energy_weight", "must be >= 0");
  check(w.penalty_weight >= 0.0, "reward.penalty_weight", "must be >= 0");
  check(w.norm > 0.0, "reward.norm", "must be > 0");

  check(cfg.timestep_hours > 0.0, "timestep_hours", "must be > 0");
  return rep;
}

std::string config_to_json(const DataCenterConfig& cfg, int indent) {
  json cabinets = json::array();
  for (const auto& c : cfg.room.cabinets) {
    cabinets.push_back({{"server_count", c.server_count}, {"inlet_offset", c.inlet_offset}, {"airflow_ref", c.airflow_ref}});
  }
  const auto& s = cfg.server;
  const auto& h = cfg.hvac;
  const auto& b = cfg.battery;
  const auto& l = cfg.loadshift;
  const auto& w = cfg.reward;
  json doc = {
      {"room", {{"rows", cfg.room.rows}, {"cabinets_per_row", cfg.room.cabinets_per_row}, {"cabinets", cabinets}}},
      {"server",
       {{"idle_power", s.idle_power}, {"full_power", s.full_power}, {"fan_ref_power", s.fan_ref_power},
        {"fan_min_ratio", s.fan_min_ratio}}},
      {"hvac",
       {{"crac_ref_power", h.crac_ref_power},
        {"cop_nominal", h.cop_nominal},
        {"cop_ambient_slope", h.cop_ambient_slope},
        {"cop_setpoint_slope", h.cop_setpoint_slope},
        {"cop_min", h.cop_min},
        {"cop_max", h.cop_max},
        {"ambient_ref", h.ambient_ref},
        {"setpoint_ref", h.setpoint_ref},
        {"setpoint_min", h.setpoint_min},
        {"setpoint_max", h.setpoint_max},
        {"cooling_tower_ref_power", h.cooling_tower_ref_power},
        {"cooling_tower_ref_load", h.cooling_tower_ref_load},
        {"pump_power", h.pump_power}}},
      {"battery",
       {{"capacity", b.capacity}, {"max_rate", b.max_rate}, {"charge_eff", b.charge_eff},
        {"discharge_eff", b.discharge_eff}, {"initial_soc_fraction", b.initial_soc_fraction}}},
      {"loadshift",
       {{"shiftable_fraction", l.shiftable_fraction}, {"deadline_steps", l.deadline_steps},
        {"util_capacity", l.util_capacity}, {"drop_penalty_weight", l.drop_penalty_weight}}},
      {"reward",
       {{"carbon_weight", w.carbon_weight}, {"energy_weight", w.energy_weight}, {"penalty_weight", w.penalty_weight},
        {"norm", w.norm}}},
      {"timestep_hours", cfg.timestep_hours},
  };
  return doc.dump(indent);
}

DataCenterConfig load_config_file(const std::string& path, std::vector<Issue>* warnings) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read config file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str(), warnings);
}

}  // namespace dctwin
