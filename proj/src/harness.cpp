#include "dctwin/harness.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "dctwin/error.hpp"
#include "dctwin/format.hpp"

namespace dctwin {

using nlohmann::ordered_json;

namespace {

constexpr std::array<std::string_view, 15> kReportColumns{
    "controller",         "steps",          "total_energy_kwh",     "it_energy_kwh",       "hvac_energy_kwh",
    "battery_charge_kwh", "battery_discharge_kwh", "battery_throughput_kwh", "carbon_kg", "total_penalty",
    "total_reward",       "avg_pue",        "work_base",            "work_executed",       "work_dropped"};

std::vector<double*> report_fields(EpisodeReport& r) {
  return {&r.total_energy_kwh, &r.it_energy_kwh, &r.hvac_energy_kwh, &r.battery_charge_kwh,
          &r.battery_discharge_kwh, &r.battery_throughput_kwh, &r.carbon_kg, &r.total_penalty,
          &r.total_reward, &r.avg_pue, &r.work_base, &r.work_executed, &r.work_dropped};
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  while (true) {
    const auto p = s.find(sep);
    out.push_back(s.substr(0, p));
    if (p == std::string_view::npos) break;
    s.remove_prefix(p + 1);
  }
  return out;
}

std::string_view strip_cr(std::string_view s) {
  while (!s.empty() && (s.back() == '\r' || s.back() == '\n')) s.remove_suffix(1);
  return s;
}

double parse_double(std::string_view s) {
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size()) throw ParseError("not a number: '" + std::string(s) + "'", 0);
  return v;
}

std::unique_ptr<Controller> plan_hill_climb(const DataCenterConfig& cfg, const AlignedTraces& traces,
                                            std::uint64_t seed, std::size_t restarts) {
  const auto hc = hill_climb_setpoint(cfg, traces, restarts, seed);
  return std::make_unique<ScheduledController>("hill_climb", schedule_to_actions(cfg, hc.schedule));
}

std::unique_ptr<Controller> plan_exhaustive(const DataCenterConfig& cfg, const AlignedTraces& traces,
                                            unsigned workers) {
  OracleOptions opt;
  opt.workers = workers;
  const auto best = exhaustive_oracle(cfg, traces, opt);
  return std::make_unique<ScheduledController>("exhaustive", best.actions);
}

void require_known_controller(std::string_view name) {
  const auto& names = controller_names();
  if (std::find(names.begin(), names.end(), name) != names.end()) return;
  std::string valid;
  for (const auto& n : names) valid += (valid.empty() ? "" : ", ") + n;
  throw UsageError("unknown controller '" + std::string(name) + "' (valid: " + valid + ")");
}

}  // namespace

const std::vector<std::string>& controller_names() {
  static const std::vector<std::string> names{"fixed", "greedy", "hill_climb", "exhaustive", "random"};
  return names;
}

std::unique_ptr<Controller> make_controller(std::string_view name, const DataCenterConfig& cfg,
                                            const AlignedTraces& traces, std::uint64_t seed,
                                            const ControllerOptions& options) {
  if (name == "fixed") return fixed_baseline(options.setpoint_hold);
  if (name == "greedy") return carbon_greedy();
  if (name == "random") return std::make_unique<RandomController>();
  if (name == "hill_climb") return plan_hill_climb(cfg, traces, seed, options.hill_climb_restarts);
  if (name == "exhaustive") return plan_exhaustive(cfg, traces, options.oracle_workers);
  require_known_controller(name);
  return nullptr;
}

EpisodeReport run_episode(const DataCenterConfig& cfg, const AlignedTraces& traces, std::string_view controller,
                          std::uint64_t seed, bool per_step, const ControllerOptions& options) {
  auto ctl = make_controller(controller, cfg, traces, seed, options);
  const SimState done = run_controller(*ctl, std::make_shared<const DataCenterConfig>(cfg),
                                       std::make_shared<const AlignedTraces>(traces), seed, per_step);
  EpisodeReport rep = episode_metrics(done);
  rep.controller = ctl->name();
  return rep;
}

DataCenterConfig load_valid_config(const std::string& path) {
  DataCenterConfig cfg;
  if (path.empty()) {
    cfg = default_config();
  } else {
    try {
      cfg = load_config_file(path);
    } catch (const ParseError& e) {
      throw ParseError(path + ": " + e.what(), e.byte_offset());
    } catch (const FieldTypeError& e) {
      throw ValidationError(path + ": " + e.what());
    }
  }
  const auto rep = validate_config(cfg);
  if (!rep.ok) {
    std::string msg = (path.empty() ? std::string("<defaults>") : path) + ": invalid config";
    for (const auto& i : rep.issues) {
      if (i.severity == Severity::error) msg += "\n  " + i.path + ": " + i.message;
    }
    throw ValidationError(msg);
  }
  return cfg;
}

EpisodeReport run_episode(const RunRequest& req) {
  const DataCenterConfig cfg = load_valid_config(req.config_path);
  // Unknown names fail before any trace is read.
  require_known_controller(req.controller);
  const auto weather = load_trace_file(req.weather_path, TraceKind::weather);
  const auto ci = load_trace_file(req.ci_path, TraceKind::carbon_intensity);
  const auto workload = load_trace_file(req.workload_path, TraceKind::workload);
  const std::size_t horizon =
      req.horizon ? *req.horizon : overlap_steps(weather, ci, workload, cfg.timestep_hours);
  const AlignedTraces traces = align(weather, ci, workload, cfg.timestep_hours, horizon);
  return run_episode(cfg, traces, req.controller, req.seed, req.per_step, req.options);
}

std::vector<ComparisonRow> compare(const std::vector<EpisodeReport>& reports, std::size_t reference) {
  if (reports.size() < 2) throw DomainError("compare needs at least two reports");
  if (reference >= reports.size()) {
    throw DomainError("reference index " + std::to_string(reference) + " out of range");
  }
  const auto& ref = reports[reference];
  if (!(ref.total_energy_kwh > 0.0) || !(ref.carbon_kg > 0.0)) {
    throw DomainError("reference report has zero energy or carbon; reductions are undefined");
  }
  std::vector<ComparisonRow> rows;
  for (std::size_t i = 0; i < reports.size(); ++i) {
    const auto& r = reports[i];
    ComparisonRow row;
    row.name = r.controller.empty() ? "report" + std::to_string(i) : r.controller;
    row.energy_kwh = r.total_energy_kwh;
    row.carbon_kg = r.carbon_kg;
    row.energy_reduction_pct = 100.0 * (ref.total_energy_kwh - r.total_energy_kwh) / ref.total_energy_kwh;
    row.carbon_reduction_pct = 100.0 * (ref.carbon_kg - r.carbon_kg) / ref.carbon_kg;
    rows.push_back(std::move(row));
  }
  return rows;
}

std::string comparison_to_csv(const std::vector<ComparisonRow>& rows) {
  std::string out = "name,energy_kwh,carbon_kg,energy_reduction_pct,carbon_reduction_pct\n";
  for (const auto& r : rows) {
    out += r.name + "," + format_double(r.energy_kwh) + "," + format_double(r.carbon_kg) + "," +
           format_fixed2(r.energy_reduction_pct) + "," + format_fixed2(r.carbon_reduction_pct) + "\n";
  }
  return out;
}

std::string comparison_to_json(const std::vector<ComparisonRow>& rows) {
  ordered_json arr = ordered_json::array();
  for (const auto& r : rows) {
    ordered_json o;
    o["name"] = r.name;
    o["energy_kwh"] = r.energy_kwh;
    o["carbon_kg"] = r.carbon_kg;
    o["energy_reduction_pct"] = r.energy_reduction_pct;
    o["carbon_reduction_pct"] = r.carbon_reduction_pct;
    arr.push_back(std::move(o));
  }
  return arr.dump();
}

std::string comparison_to_table(const std::vector<ComparisonRow>& rows) {
  std::ostringstream out;
  out << "| controller | energy (kWh) | carbon (kg) | energy reduction (%) | carbon reduction (%) |\n";
  out << "|---|---:|---:|---:|---:|\n";
  for (const auto& r : rows) {
    out << "| " << r.name << " | " << format_fixed2(r.energy_kwh) << " | " << format_fixed2(r.carbon_kg) << " | "
        << format_fixed2(r.energy_reduction_pct) << " | " << format_fixed2(r.carbon_reduction_pct) << " |\n";
  }
  return out.str();
}

ReportFormat report_format_from_string(std::string_view name) {
  if (name == "json") return ReportFormat::json;
  if (name == "csv") return ReportFormat::csv;
  throw UsageError("unknown format '" + std::string(name) + "' (expected json or csv)");
}

std::string report_to_json(const EpisodeReport& report) {
  EpisodeReport copy = report;
  ordered_json doc;
  doc["controller"] = report.controller;
  doc["steps"] = report.steps;
  const auto fields = report_fields(copy);
  for (std::size_t i = 0; i < fields.size(); ++i) doc[std::string(kReportColumns[i + 2])] = *fields[i];
  return doc.dump() + "\n";
}

std::string report_to_csv(const EpisodeReport& report) {
  std::string header;
  for (std::size_t i = 0; i < kReportColumns.size(); ++i) {
    if (i) header += ',';
    header += kReportColumns[i];
  }
  EpisodeReport copy = report;
  std::string row = report.controller + "," + std::to_string(report.steps);
  for (double* f : report_fields(copy)) row += "," + format_double(*f);
  return header + "\n" + row + "\n";
}

EpisodeReport report_from_json(std::string_view text) {
  ordered_json doc;
  try {
    doc = ordered_json::parse(text.begin(), text.end());
  } catch (const ordered_json::parse_error& e) {
    throw ParseError(std::string("malformed report JSON: ") + e.what(), e.byte);
  }
  EpisodeReport r;
  try {
    r.controller = doc.at("controller").get<std::string>();
    r.steps = doc.at("steps").get<std::size_t>();
    const auto fields = report_fields(r);
    for (std::size_t i = 0; i < fields.size(); ++i) *fields[i] = doc.at(std::string(kReportColumns[i + 2])).get<double>();
  } catch (const ordered_json::exception& e) {
    throw ParseError(std::string("report JSON: ") + e.what(), 0);
  }
  return r;
}

EpisodeReport report_from_csv(std::string_view text) {
  const auto lines = split(text, '\n');
  if (lines.size() < 2) throw ParseError("report CSV needs a header and a data row", 0);
  const auto header = split(strip_cr(lines[0]), ',');
  const auto cells = split(strip_cr(lines[1]), ',');
  if (header.size() != kReportColumns.size() || cells.size() != kReportColumns.size()) {
    throw ParseError("report CSV must have " + std::to_string(kReportColumns.size()) + " columns", 0);
  }
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (header[i] != kReportColumns[i]) throw ParseError("unexpected column '" + std::string(header[i]) + "'", 0);
  }
  EpisodeReport r;
  r.controller = std::string(cells[0]);
  r.steps = static_cast<std::size_t>(parse_double(cells[1]));
  const auto fields = report_fields(r);
  for (std::size_t i = 0; i < fields.size(); ++i) *fields[i] = parse_double(cells[i + 2]);
  return r;
}

std::string series_to_csv(const std::vector<StepRecord>& series) {
  std::string out =
      "t,setpoint,ambient,ci,base_util,effective_util,it_power_kw,hvac_power_kw,grid_energy_kwh,carbon_kg,soc_kwh,"
      "queued,penalty,reward\n";
  for (const auto& s : series) {
    out += std::to_string(s.t);
    for (double v : {s.setpoint, s.ambient, s.ci, s.base_util, s.effective_util, s.it_power_kw, s.hvac_power_kw,
                     s.grid_energy_kwh, s.carbon_kg, s.soc_kwh, s.queued, s.penalty, s.reward}) {
      out += ',';
      out += format_double(v);
    }
    out += '\n';
  }
  return out;
}

std::string series_path_for(const std::string& report_path) {
  std::filesystem::path p(report_path);
  p.replace_extension(".steps.csv");
  return p.string();
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_text_file(const std::string& path, std::string_view text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write '" + path + "'");
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  if (!out) throw IoError("write failed for '" + path + "'");
}

void emit_report(const EpisodeReport& report, ReportFormat format, const std::string& path, bool per_step) {
  write_text_file(path, format == ReportFormat::json ? report_to_json(report) : report_to_csv(report));
  if (per_step) write_text_file(series_path_for(path), series_to_csv(report.series));
}

EpisodeReport read_report_file(const std::string& path) {
  const std::string text = read_text_file(path);
  try {
    if (std::filesystem::path(path).extension() == ".csv") return report_from_csv(text);
    return report_from_json(text);
  } catch (const ParseError& e) {
    throw ParseError(path + ": " + e.what(), e.byte_offset());
  }
}

TemperatureGrid hotspots(const DataCenterConfig& cfg, double setpoint, double utilization) {
  return hotspot_grid(cfg, room_step(cfg, setpoint, utilization));
}

void emit_hotspots(const std::string& config_path, double setpoint, double utilization, ReportFormat format,
                   const std::string& path, GridField field) {
  const DataCenterConfig cfg = load_valid_config(config_path);
  const TemperatureGrid grid = hotspots(cfg, setpoint, utilization);
  write_text_file(path, format == ReportFormat::json ? grid_to_json(grid) + "\n" : grid_to_csv(grid, field));
}

}  // namespace dctwin
