#pragma once

#include <chrono>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace dctwin {

enum class TraceKind { weather, carbon_intensity, workload };

std::string_view to_string(TraceKind kind);
TraceKind trace_kind_from_string(std::string_view name);

using Timestamp = std::chrono::sys_seconds;

// Parses `YYYY-MM-DDTHH:MM:SSZ`; throws TraceError.
Timestamp parse_timestamp(std::string_view text);
std::string format_timestamp(Timestamp ts);

struct TimeSeries {
  TraceKind kind = TraceKind::weather;
  Timestamp start{};
  double step_hours = 1.0;
  std::vector<double> values;

  Timestamp end() const;  // time of the last sample
  bool operator==(const TimeSeries&) const = default;
};

// Weather in degC, carbon intensity in gCO2eq/kWh, workload as utilization in [0, 1].
struct AlignedTraces {
  Timestamp start{};
  double step_hours = 0.25;
  std::size_t horizon = 0;
  std::vector<double> weather;
  std::vector<double> carbon_intensity;
  std::vector<double> workload;

  bool operator==(const AlignedTraces&) const = default;
};

// Throws TraceError when the value is outside the kind's range.
void check_trace_value(TraceKind kind, double value, std::size_t row);

// CSV with header `timestamp,value`, uniformly spaced rows, at least two rows.
TimeSeries load_trace(std::string_view csv_text, TraceKind kind);
TimeSeries load_trace_file(const std::string& path, TraceKind kind);
std::string trace_to_csv(const TimeSeries& ts);

// Linear interpolation at an absolute time inside [start, end()].
double sample_at(const TimeSeries& ts, Timestamp when);

TimeSeries resample(const TimeSeries& ts, double target_step_hours);

// Number of whole `step_hours` samples the three series share starting at the
// latest common start; throws AlignError when the windows do not overlap.
std::size_t overlap_steps(const TimeSeries& weather, const TimeSeries& ci, const TimeSeries& workload,
                          double step_hours);

AlignedTraces align(const TimeSeries& weather, const TimeSeries& ci, const TimeSeries& workload,
                    double step_hours, std::size_t horizon);

struct DiurnalParams {
  double mean = 0.0;
  double amplitude = 0.0;
  double period_hours = 24.0;
  double phase_hours = 0.0;
  double step_hours = 0.25;
  std::size_t horizon = 96;
  std::uint64_t seed = 0;
  double noise_std = 0.0;
  Timestamp start = default_trace_start();

  static Timestamp default_trace_start();
};

// mean + amplitude * sin(2 pi (t - phase) / period) + N(0, noise_std), clipped to the kind's range.
TimeSeries synth_diurnal(TraceKind kind, const DiurnalParams& params);

// Aligned traces built directly from three synthetic series sharing `step_hours` and `horizon`.
AlignedTraces synth_aligned(const DiurnalParams& weather, const DiurnalParams& ci, const DiurnalParams& workload);

}  // namespace dctwin
