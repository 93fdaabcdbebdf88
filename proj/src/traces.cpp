#include "dctwin/traces.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numbers>
#include <random>
#include <sstream>

#include "dctwin/error.hpp"
#include "dctwin/format.hpp"

namespace dctwin {

namespace {

using std::chrono::seconds;

std::int64_t step_seconds(double step_hours) {
  if (!(step_hours > 0.0) || !std::isfinite(step_hours)) throw DomainError("step must be > 0 hours");
  const auto s = std::llround(step_hours * 3600.0);
  if (s < 1) throw DomainError("step shorter than one second");
  return s;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

template <typename T>
bool parse_number(std::string_view text, T& out) {
  const char* first = text.data();
  const char* last = first + text.size();
  auto [ptr, ec] = std::from_chars(first, last, out);
  return ec == std::errc{} && ptr == last;
}

std::string window(const TimeSeries& ts) {
  return std::string(to_string(ts.kind)) + " [" + format_timestamp(ts.start) + ", " + format_timestamp(ts.end()) + "]";
}

}  // namespace

std::string_view to_string(TraceKind kind) {
  switch (kind) {
    case TraceKind::weather:
      return "weather";
    case TraceKind::carbon_intensity:
      return "carbon_intensity";
    case TraceKind::workload:
      return "workload";
  }
  return "unknown";
}

TraceKind trace_kind_from_string(std::string_view name) {
  if (name == "weather") return TraceKind::weather;
  if (name == "carbon_intensity" || name == "ci") return TraceKind::carbon_intensity;
  if (name == "workload") return TraceKind::workload;
  throw UsageError("unknown trace kind '" + std::string(name) + "' (expected weather, carbon_intensity, workload)");
}

Timestamp parse_timestamp(std::string_view text) {
  // YYYY-MM-DDTHH:MM:SSZ
  if (text.size() != 20 || text[4] != '-' || text[7] != '-' || text[10] != 'T' || text[13] != ':' ||
      text[16] != ':' || text[19] != 'Z') {
    throw TraceError("bad timestamp '" + std::string(text) + "' (expected YYYY-MM-DDTHH:MM:SSZ)");
  }
  int y = 0, mo = 0, d = 0, h = 0, mi = 0, s = 0;
  const bool ok = parse_number(text.substr(0, 4), y) && parse_number(text.substr(5, 2), mo) &&
                  parse_number(text.substr(8, 2), d) && parse_number(text.substr(11, 2), h) &&
                  parse_number(text.substr(14, 2), mi) && parse_number(text.substr(17, 2), s);
  const std::chrono::year_month_day ymd{std::chrono::year{y}, std::chrono::month{static_cast<unsigned>(mo)},
                                        std::chrono::day{static_cast<unsigned>(d)}};
  if (!ok || !ymd.ok() || h > 23 || mi > 59 || s > 59) {
    throw TraceError("bad timestamp '" + std::string(text) + "'");
  }
  return std::chrono::sys_days{ymd} + std::chrono::hours{h} + std::chrono::minutes{mi} + seconds{s};
}

std::string format_timestamp(Timestamp ts) {
  const auto day = std::chrono::floor<std::chrono::days>(ts);
  const std::chrono::year_month_day ymd{day};
  const std::chrono::hh_mm_ss hms{ts - day};
  char buf[64];
  std::snprintf(buf, sizeof buf, "%04d-%02u-%02uT%02ld:%02ld:%02ldZ", static_cast<int>(ymd.year()),
                static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day()),
                static_cast<long>(hms.hours().count()), static_cast<long>(hms.minutes().count()),
                static_cast<long>(hms.seconds().count()));
  return buf;
}

Timestamp TimeSeries::end() const {
  const auto n = values.empty() ? 0 : static_cast<std::int64_t>(values.size() - 1);
  return start + seconds{n * step_seconds(step_hours)};
}

void check_trace_value(TraceKind kind, double value, std::size_t row) {
  if (!std::isfinite(value)) throw TraceError("non-finite value", row);
  switch (kind) {
    case TraceKind::workload:
      if (value < 0.0 || value > 1.0) throw TraceError("workload value " + format_double(value) + " outside [0, 1]", row);
      break;
    case TraceKind::carbon_intensity:
      if (value < 0.0) throw TraceError("carbon intensity " + format_double(value) + " is negative", row);
      break;
    case TraceKind::weather:
      break;
  }
}

TimeSeries load_trace(std::string_view csv_text, TraceKind kind) {
  std::vector<std::string_view> lines;
  while (!csv_text.empty()) {
    const auto nl = csv_text.find('\n');
    auto line = trim(csv_text.substr(0, nl));
    if (!line.empty()) lines.push_back(line);
    if (nl == std::string_view::npos) break;
    csv_text.remove_prefix(nl + 1);
  }
  if (lines.empty() || lines.front() != "timestamp,value") {
    throw TraceError("missing header 'timestamp,value'");
  }
  if (lines.size() == 1) throw TraceError("empty trace body");
  if (lines.size() == 2) throw TraceError("at least two rows are needed to infer the step", 1);

  TimeSeries ts;
  ts.kind = kind;
  std::int64_t step_s = 0;
  Timestamp prev{};
  for (std::size_t i = 1; i < lines.size(); ++i) {
    const std::size_t row = i;
    const auto line = lines[i];
    const auto comma = line.find(',');
    if (comma == std::string_view::npos || line.find(',', comma + 1) != std::string_view::npos) {
      throw TraceError("expected two comma-separated fields", row);
    }
    Timestamp when;
    try {
      when = parse_timestamp(trim(line.substr(0, comma)));
    } catch (const TraceError& e) {
      throw TraceError(e.what(), row);
    }
    double value = 0.0;
    if (!parse_number(trim(line.substr(comma + 1)), value)) {
      throw TraceError("value is not a number", row);
    }
    check_trace_value(kind, value, row);

    if (row == 1) {
      ts.start = when;
    } else {
      const auto delta = (when - prev).count();
      if (delta <= 0) throw TraceError("timestamps not strictly increasing", row);
      if (row == 2) {
        step_s = delta;
      } else if (delta != step_s) {
        throw TraceError("non-uniform spacing (" + std::to_string(delta) + " s, expected " + std::to_string(step_s) + " s)",
                         row);
      }
    }
    prev = when;
    ts.values.push_back(value);
  }
  ts.step_hours = static_cast<double>(step_s) / 3600.0;
  return ts;
}

TimeSeries load_trace_file(const std::string& path, TraceKind kind) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read trace file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  try {
    return load_trace(buf.str(), kind);
  } catch (const TraceError& e) {
    throw TraceError(path + ": " + e.what());
  }
}

std::string trace_to_csv(const TimeSeries& ts) {
  std::string out = "timestamp,value\n";
  const auto step_s = step_seconds(ts.step_hours);
  for (std::size_t i = 0; i < ts.values.size(); ++i) {
    out += format_timestamp(ts.start + seconds{static_cast<std::int64_t>(i) * step_s});
    out += ',';
    out += format_double(ts.values[i]);
    out += '\n';
  }
  return out;
}

double sample_at(const TimeSeries& ts, Timestamp when) {
  if (ts.values.empty()) throw DomainError("sample_at on empty series");
  const auto step_s = step_seconds(ts.step_hours);
  const auto elapsed = (when - ts.start).count();
  const auto last = static_cast<std::int64_t>(ts.values.size() - 1);
  if (elapsed < 0 || elapsed > last * step_s) {
    throw DomainError("sample time " + format_timestamp(when) + " outside " + window(ts));
  }
  const auto i = elapsed / step_s;
  const auto rem = elapsed % step_s;
  const double a = ts.values[static_cast<std::size_t>(i)];
  if (rem == 0) return a;
  const double b = ts.values[static_cast<std::size_t>(i + 1)];
  const double frac = static_cast<double>(rem) / static_cast<double>(step_s);
  return a + (b - a) * frac;
}

TimeSeries resample(const TimeSeries& ts, double target_step_hours) {
  if (!(target_step_hours > 0.0)) throw DomainError("target step must be > 0");
  if (ts.values.empty()) throw DomainError("cannot resample an empty series");
  const auto target_s = std::llround(target_step_hours * 3600.0);
  if (target_s < 1) throw DomainError("target step produces < 1 sample");
  const auto span_s = (ts.end() - ts.start).count();
  const auto count = span_s / target_s + 1;

  TimeSeries out;
  out.kind = ts.kind;
  out.start = ts.start;
  out.step_hours = target_step_hours;
  out.values.reserve(static_cast<std::size_t>(count));
  for (std::int64_t k = 0; k < count; ++k) out.values.push_back(sample_at(ts, ts.start + seconds{k * target_s}));
  return out;
}

std::size_t overlap_steps(const TimeSeries& weather, const TimeSeries& ci, const TimeSeries& workload,
                          double step_hours) {
  const auto step_s = step_seconds(step_hours);
  const Timestamp start = std::max({weather.start, ci.start, workload.start});
  const Timestamp end = std::min({weather.end(), ci.end(), workload.end()});
  if (end < start) {
    throw AlignError("traces do not overlap: " + window(weather) + ", " + window(ci) + ", " + window(workload));
  }
  return static_cast<std::size_t>((end - start).count() / step_s) + 1;
}

AlignedTraces align(const TimeSeries& weather, const TimeSeries& ci, const TimeSeries& workload, double step_hours,
                    std::size_t horizon) {
  if (horizon == 0) throw AlignError("horizon must be >= 1");
  const std::size_t available = overlap_steps(weather, ci, workload, step_hours);
  if (available < horizon) {
    throw AlignError("overlap provides " + std::to_string(available) + " steps of " + format_double(step_hours) +
                     " h, horizon " + std::to_string(horizon) + " requested");
  }
  const auto step_s = step_seconds(step_hours);
  AlignedTraces out;
  out.start = std::max({weather.start, ci.start, workload.start});
  out.step_hours = step_hours;
  out.horizon = horizon;
  out.weather.reserve(horizon);
  out.carbon_intensity.reserve(horizon);
  out.workload.reserve(horizon);
  for (std::size_t k = 0; k < horizon; ++k) {
    const Timestamp when = out.start + seconds{static_cast<std::int64_t>(k) * step_s};
    out.weather.push_back(sample_at(weather, when));
    out.carbon_intensity.push_back(sample_at(ci, when));
    out.workload.push_back(sample_at(workload, when));
  }
  return out;
}

Timestamp DiurnalParams::default_trace_start() {
  return std::chrono::sys_days{std::chrono::year{2023} / 1 / 1};
}

TimeSeries synth_diurnal(TraceKind kind, const DiurnalParams& p) {
  if (p.amplitude < 0.0) throw DomainError("amplitude must be >= 0");
  if (p.noise_std < 0.0) throw DomainError("noise_std must be >= 0");
  if (!(p.period_hours > 0.0)) throw DomainError("period must be > 0");
  if (p.horizon == 0) throw DomainError("horizon must be >= 1");
  step_seconds(p.step_hours);

  std::mt19937_64 rng(p.seed);
  std::normal_distribution<double> noise(0.0, p.noise_std > 0.0 ? p.noise_std : 1.0);

  TimeSeries ts;
  ts.kind = kind;
  ts.start = p.start;
  ts.step_hours = p.step_hours;
  ts.values.reserve(p.horizon);
  for (std::size_t k = 0; k < p.horizon; ++k) {
    const double t = static_cast<double>(k) * p.step_hours;
    double v = p.mean + p.amplitude * std::sin(2.0 * std::numbers::pi * (t - p.phase_hours) / p.period_hours);
    if (p.noise_std > 0.0) v += noise(rng);
    if (kind == TraceKind::workload) v = std::clamp(v, 0.0, 1.0);
    if (kind == TraceKind::carbon_intensity) v = std::max(v, 0.0);
    ts.values.push_back(v);
  }
  return ts;
}

AlignedTraces synth_aligned(const DiurnalParams& weather, const DiurnalParams& ci, const DiurnalParams& workload) {
  const auto w = synth_diurnal(TraceKind::weather, weather);
  const auto c = synth_diurnal(TraceKind::carbon_intensity, ci);
  const auto l = synth_diurnal(TraceKind::workload, workload);
  const std::size_t horizon = std::min({w.values.size(), c.values.size(), l.values.size()});
  return align(w, c, l, weather.step_hours, horizon);
}

}  // namespace dctwin
