#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "dctwin/baselines.hpp"
#include "dctwin/env.hpp"

namespace dctwin {

struct ControllerOptions {
  double setpoint_hold = 22.0;          // fixed
  std::size_t hill_climb_restarts = 2;  // hill_climb
  unsigned oracle_workers = 1;          // exhaustive
};

// fixed, greedy, hill_climb, exhaustive, random
const std::vector<std::string>& controller_names();

// Planning controllers (hill_climb, exhaustive) solve the whole instance here.
// Throws UsageError for an unknown name.
std::unique_ptr<Controller> make_controller(std::string_view name, const DataCenterConfig& cfg,
                                            const AlignedTraces& traces, std::uint64_t seed,
                                            const ControllerOptions& options = {});

EpisodeReport run_episode(const DataCenterConfig& cfg, const AlignedTraces& traces, std::string_view controller,
                          std::uint64_t seed, bool per_step = false, const ControllerOptions& options = {});

struct RunRequest {
  std::string config_path;  // empty: default_config()
  std::string weather_path;
  std::string ci_path;
  std::string workload_path;
  std::string controller = "fixed";
  std::uint64_t seed = 0;
  std::optional<std::size_t> horizon;  // default: the whole overlap
  bool per_step = false;
  ControllerOptions options;
};

// parse -> validate -> load/align -> reset -> step loop -> metrics.
EpisodeReport run_episode(const RunRequest& request);

// Config from a file (or defaults for an empty path), validated; errors carry the file name.
DataCenterConfig load_valid_config(const std::string& path);

struct ComparisonRow {
  std::string name;
  double energy_kwh = 0.0;
  double carbon_kg = 0.0;
  double energy_reduction_pct = 0.0;  // 100 * (ref - x) / ref
  double carbon_reduction_pct = 0.0;
};

// Throws DomainError with fewer than two reports, a bad reference index, or
// zero reference totals.
std::vector<ComparisonRow> compare(const std::vector<EpisodeReport>& reports, std::size_t reference);

std::string comparison_to_csv(const std::vector<ComparisonRow>& rows);
std::string comparison_to_json(const std::vector<ComparisonRow>& rows);
std::string comparison_to_table(const std::vector<ComparisonRow>& rows);

enum class ReportFormat { json, csv };
ReportFormat report_format_from_string(std::string_view name);

std::string report_to_json(const EpisodeReport& report);
std::string report_to_csv(const EpisodeReport& report);
EpisodeReport report_from_json(std::string_view text);
EpisodeReport report_from_csv(std::string_view text);
std::string series_to_csv(const std::vector<StepRecord>& series);

// Sibling file for the per-step series: "out.json" -> "out.steps.csv".
std::string series_path_for(const std::string& report_path);

// Writes the report; with per_step the series goes to series_path_for(path).
void emit_report(const EpisodeReport& report, ReportFormat format, const std::string& path, bool per_step = false);
EpisodeReport read_report_file(const std::string& path);

TemperatureGrid hotspots(const DataCenterConfig& cfg, double setpoint, double utilization);

// CSV writes the requested field only (one grid row per line); JSON carries both grids.
void emit_hotspots(const std::string& config_path, double setpoint, double utilization, ReportFormat format,
                   const std::string& path, GridField field = GridField::inlet);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, std::string_view text);

}  // namespace dctwin
