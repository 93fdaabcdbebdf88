// dctwin: run episodes, compare reports, export hotspot grids, validate configs.
//
// Exit codes: 0 success, 2 validation error, 3 I/O error, 4 usage error.

#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "CLI11.hpp"
#include "dctwin/config.hpp"
#include "dctwin/error.hpp"
#include "dctwin/harness.hpp"
#include "dctwin/traces.hpp"

namespace {

constexpr int kExitValidation = 2;
constexpr int kExitIo = 3;
constexpr int kExitUsage = 4;

void write_or_print(const std::string& out, const std::string& text) {
  if (out.empty()) {
    std::cout << text;
  } else {
    dctwin::write_text_file(out, text);
  }
}

int cmd_validate(const std::string& config_path, const std::string& format) {
  std::vector<dctwin::Issue> warnings;
  dctwin::ValidationReport rep;
  try {
    rep = dctwin::validate_config(dctwin::load_config_file(config_path, &warnings));
  } catch (const dctwin::FieldTypeError& e) {
    rep.add({e.path(), e.what(), dctwin::Severity::error});
  }
  for (auto& w : warnings) rep.add(std::move(w));

  if (format == "json") {
    nlohmann::ordered_json doc;
    doc["ok"] = rep.ok;
    doc["issues"] = nlohmann::ordered_json::array();
    for (const auto& i : rep.issues) {
      doc["issues"].push_back({{"path", i.path},
                               {"message", i.message},
                               {"severity", i.severity == dctwin::Severity::error ? "error" : "warning"}});
    }
    std::cout << doc.dump() << "\n";
  } else {
    for (const auto& i : rep.issues) {
      std::cout << (i.severity == dctwin::Severity::error ? "error   " : "warning ") << i.path << ": " << i.message
                << "\n";
    }
    std::cout << (rep.ok ? "ok" : "invalid") << " (" << rep.error_count() << " error(s), "
              << rep.issues.size() - rep.error_count() << " warning(s))\n";
  }
  return rep.ok ? 0 : kExitValidation;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Data center digital twin: simulation, baselines and reports"};
  app.require_subcommand(1);

  // run
  dctwin::RunRequest run;
  std::optional<std::size_t> run_horizon;
  std::string run_out;
  std::string run_format = "json";
  auto* run_cmd = app.add_subcommand("run", "Run one episode with a named controller");
  run_cmd->add_option("--config", run.config_path, "Config JSON (defaults when omitted)");
  run_cmd->add_option("--weather", run.weather_path, "Weather trace CSV (degC)")->required();
  run_cmd->add_option("--ci", run.ci_path, "Carbon intensity trace CSV (gCO2eq/kWh)")->required();
  run_cmd->add_option("--workload", run.workload_path, "Workload trace CSV (utilization 0..1)")->required();
  run_cmd->add_option("--controller", run.controller, "fixed, greedy, hill_climb, exhaustive, random")
      ->capture_default_str();
  run_cmd->add_option("--seed", run.seed, "Seed for every random choice")->capture_default_str();
  run_cmd->add_option("--horizon", run_horizon, "Steps to simulate (default: the whole trace overlap)");
  run_cmd->add_option("--out", run_out, "Report path (stdout when omitted)");
  run_cmd->add_option("--format", run_format, "json or csv")->capture_default_str();
  run_cmd->add_flag("--per-step", run.per_step, "Also write the per-step series next to --out");
  run_cmd->add_option("--setpoint-hold", run.options.setpoint_hold, "Target of the fixed controller (degC)")
      ->capture_default_str();
  run_cmd->add_option("--restarts", run.options.hill_climb_restarts, "Random restarts of hill_climb")
      ->capture_default_str();
  run_cmd->add_option("--workers", run.options.oracle_workers, "Threads for the exhaustive oracle")
      ->capture_default_str();

  // compare
  std::vector<std::string> cmp_reports;
  std::size_t cmp_reference = 0;
  std::string cmp_format = "table";
  std::string cmp_out;
  auto* cmp_cmd = app.add_subcommand("compare", "Percentage reductions of reports against a reference");
  cmp_cmd->add_option("reports", cmp_reports, "Report files (.json or .csv)")->required();
  cmp_cmd->add_option("--reference", cmp_reference, "Index of the reference report")->capture_default_str();
  cmp_cmd->add_option("--format", cmp_format, "table, csv or json")->capture_default_str();
  cmp_cmd->add_option("--out", cmp_out, "Output path (stdout when omitted)");

  // hotspots
  std::string hs_config;
  std::optional<double> hs_setpoint;
  double hs_util = 0.0;
  std::string hs_format = "json";
  std::string hs_field = "inlet";
  std::string hs_out;
  auto* hs_cmd = app.add_subcommand("hotspots", "Cabinet temperature grid at one operating point");
  hs_cmd->add_option("--config", hs_config, "Config JSON (defaults when omitted)");
  hs_cmd->add_option("--setpoint", hs_setpoint, "Supply air setpoint (default: setpoint_ref)");
  hs_cmd->add_option("--utilization", hs_util, "Uniform utilization 0..1")->capture_default_str();
  hs_cmd->add_option("--format", hs_format, "json or csv")->capture_default_str();
  hs_cmd->add_option("--field", hs_field, "Grid written by csv: inlet or outlet")->capture_default_str();
  hs_cmd->add_option("--out", hs_out, "Output path (stdout when omitted)");

  // validate
  std::string val_config;
  std::string val_format = "text";
  auto* val_cmd = app.add_subcommand("validate", "Check a config file and list every issue");
  val_cmd->add_option("--config", val_config, "Config JSON")->required();
  val_cmd->add_option("--format", val_format, "text or json")->capture_default_str();

  // synth
  std::string syn_kind;
  dctwin::DiurnalParams syn;
  std::string syn_start;
  std::string syn_out;
  auto* syn_cmd = app.add_subcommand("synth", "Write a synthetic diurnal trace CSV");
  syn_cmd->add_option("--kind", syn_kind, "weather, carbon_intensity or workload")->required();
  syn_cmd->add_option("--mean", syn.mean)->capture_default_str();
  syn_cmd->add_option("--amplitude", syn.amplitude)->capture_default_str();
  syn_cmd->add_option("--period", syn.period_hours, "Hours")->capture_default_str();
  syn_cmd->add_option("--phase", syn.phase_hours, "Hours")->capture_default_str();
  syn_cmd->add_option("--step", syn.step_hours, "Hours")->capture_default_str();
  syn_cmd->add_option("--horizon", syn.horizon, "Samples")->capture_default_str();
  syn_cmd->add_option("--seed", syn.seed)->capture_default_str();
  syn_cmd->add_option("--noise", syn.noise_std, "Gaussian noise std")->capture_default_str();
  syn_cmd->add_option("--start", syn_start, "YYYY-MM-DDTHH:MM:SSZ (default 2023-01-01T00:00:00Z)");
  syn_cmd->add_option("--out", syn_out, "Output path (stdout when omitted)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  try {
    if (*run_cmd) {
      const auto format = dctwin::report_format_from_string(run_format);
      if (run.per_step && run_out.empty()) throw dctwin::UsageError("--per-step needs --out");
      run.horizon = run_horizon;
      const auto report = dctwin::run_episode(run);
      if (run_out.empty()) {
        std::cout << (format == dctwin::ReportFormat::json ? dctwin::report_to_json(report)
                                                           : dctwin::report_to_csv(report));
      } else {
        dctwin::emit_report(report, format, run_out, run.per_step);
      }
    } else if (*cmp_cmd) {
      std::vector<dctwin::EpisodeReport> reports;
      for (const auto& p : cmp_reports) reports.push_back(dctwin::read_report_file(p));
      std::vector<dctwin::ComparisonRow> rows;
      try {
        rows = dctwin::compare(reports, cmp_reference);
      } catch (const dctwin::DomainError& e) {
        throw dctwin::UsageError(e.what());
      }
      std::string text;
      if (cmp_format == "table") {
        text = dctwin::comparison_to_table(rows);
      } else if (cmp_format == "csv") {
        text = dctwin::comparison_to_csv(rows);
      } else if (cmp_format == "json") {
        text = dctwin::comparison_to_json(rows) + "\n";
      } else {
        throw dctwin::UsageError("unknown format '" + cmp_format + "' (expected table, csv or json)");
      }
      write_or_print(cmp_out, text);
    } else if (*hs_cmd) {
      const auto format = dctwin::report_format_from_string(hs_format);
      dctwin::GridField field;
      if (hs_field == "inlet") {
        field = dctwin::GridField::inlet;
      } else if (hs_field == "outlet") {
        field = dctwin::GridField::outlet;
      } else {
        throw dctwin::UsageError("unknown field '" + hs_field + "' (expected inlet or outlet)");
      }
      const auto cfg = dctwin::load_valid_config(hs_config);
      const double setpoint = hs_setpoint.value_or(cfg.hvac.setpoint_ref);
      if (hs_out.empty()) {
        const auto grid = dctwin::hotspots(cfg, setpoint, hs_util);
        std::cout << (format == dctwin::ReportFormat::json ? dctwin::grid_to_json(grid) + "\n"
                                                           : dctwin::grid_to_csv(grid, field));
      } else {
        dctwin::emit_hotspots(hs_config, setpoint, hs_util, format, hs_out, field);
      }
    } else if (*val_cmd) {
      return cmd_validate(val_config, val_format);
    } else if (*syn_cmd) {
      const auto kind = dctwin::trace_kind_from_string(syn_kind);
      if (!syn_start.empty()) syn.start = dctwin::parse_timestamp(syn_start);
      write_or_print(syn_out, dctwin::trace_to_csv(dctwin::synth_diurnal(kind, syn)));
    }
  } catch (const dctwin::UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const dctwin::IoError& e) {
    std::cerr << "I/O error: " << e.what() << "\n";
    return kExitIo;
  } catch (const dctwin::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitValidation;
  }
  return 0;
}
