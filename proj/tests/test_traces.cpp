#include <gtest/gtest.h>

#include <cmath>

#include "dctwin/error.hpp"
#include "dctwin/traces.hpp"

using namespace dctwin;
using namespace std::chrono_literals;

namespace {

TimeSeries series(const std::string& start, double step_hours, std::vector<double> values,
                  TraceKind kind = TraceKind::weather) {
  return TimeSeries{kind, parse_timestamp(start), step_hours, std::move(values)};
}

}  // namespace

TEST(Traces, TimestampRoundTrip) {
  const auto ts = parse_timestamp("2023-03-05T07:08:09Z");
  EXPECT_EQ(format_timestamp(ts), "2023-03-05T07:08:09Z");
  EXPECT_THROW(parse_timestamp("2023-03-05 07:08:09"), TraceError);
  EXPECT_THROW(parse_timestamp("2023-02-30T00:00:00Z"), TraceError);
  EXPECT_THROW(parse_timestamp("2023-03-05T25:00:00Z"), TraceError);
}

TEST(Traces, LoadTwoRows) {
  const auto ts = load_trace("timestamp,value\n2023-01-01T00:00:00Z,10.0\n2023-01-01T01:00:00Z,12.0\n",
                             TraceKind::weather);
  EXPECT_EQ(ts.step_hours, 1.0);
  EXPECT_EQ(ts.values, (std::vector<double>{10.0, 12.0}));
  EXPECT_EQ(format_timestamp(ts.start), "2023-01-01T00:00:00Z");
  EXPECT_EQ(format_timestamp(ts.end()), "2023-01-01T01:00:00Z");
}

TEST(Traces, CrlfAndTrailingBlankLineAccepted) {
  const auto ts = load_trace("timestamp,value\r\n2023-01-01T00:00:00Z,1\r\n2023-01-01T00:15:00Z,2\r\n\r\n",
                             TraceKind::carbon_intensity);
  EXPECT_EQ(ts.step_hours, 0.25);
  EXPECT_EQ(ts.values.size(), 2u);
}

TEST(Traces, WorkloadRangeErrorNamesRow) {
  try {
    load_trace("timestamp,value\n2023-01-01T00:00:00Z,0.5\n2023-01-01T01:00:00Z,1.5\n", TraceKind::workload);
    FAIL();
  } catch (const TraceError& e) {
    EXPECT_EQ(e.row(), 2u);
  }
  EXPECT_THROW(load_trace("timestamp,value\n2023-01-01T00:00:00Z,-1\n2023-01-01T01:00:00Z,1\n",
                          TraceKind::carbon_intensity),
               TraceError);
  // Weather may be negative.
  EXPECT_NO_THROW(load_trace("timestamp,value\n2023-01-01T00:00:00Z,-10\n2023-01-01T01:00:00Z,-12\n",
                             TraceKind::weather));
}

TEST(Traces, NonUniformSpacingNamesRow) {
  try {
    load_trace("timestamp,value\n2023-01-01T00:00:00Z,1\n2023-01-01T01:00:00Z,2\n2023-01-01T03:00:00Z,3\n",
               TraceKind::weather);
    FAIL();
  } catch (const TraceError& e) {
    EXPECT_EQ(e.row(), 3u);
  }
}

TEST(Traces, MalformedInputs) {
  EXPECT_THROW(load_trace("", TraceKind::weather), TraceError);
  EXPECT_THROW(load_trace("timestamp,value\n", TraceKind::weather), TraceError);
  EXPECT_THROW(load_trace("time,val\n2023-01-01T00:00:00Z,1\n2023-01-01T01:00:00Z,1\n", TraceKind::weather),
               TraceError);
  EXPECT_THROW(load_trace("timestamp,value\n2023-01-01T00:00:00Z,1\n", TraceKind::weather), TraceError);
  EXPECT_THROW(load_trace("timestamp,value\n2023-01-01T00:00:00Z,abc\n2023-01-01T01:00:00Z,1\n", TraceKind::weather),
               TraceError);
  EXPECT_THROW(load_trace("timestamp,value\n2023-01-01T01:00:00Z,1\n2023-01-01T00:00:00Z,1\n", TraceKind::weather),
               TraceError);
  EXPECT_THROW(load_trace_file("/nonexistent/trace.csv", TraceKind::weather), IoError);
}

TEST(Traces, CsvRoundTrip) {
  const auto ts = series("2023-06-01T12:00:00Z", 0.25, {1.5, -2.0, 3.25, 1e-7});
  EXPECT_EQ(trace_to_csv(ts),
            "timestamp,value\n2023-06-01T12:00:00Z,1.5\n2023-06-01T12:15:00Z,-2.0\n"
            "2023-06-01T12:30:00Z,3.25\n2023-06-01T12:45:00Z,1e-07\n");
  EXPECT_EQ(load_trace(trace_to_csv(ts), TraceKind::weather), ts);
}

TEST(Traces, ResampleQuarterPoints) {
  const auto out = resample(series("2023-01-01T00:00:00Z", 1.0, {0.0, 4.0}), 0.25);
  EXPECT_EQ(out.step_hours, 0.25);
  EXPECT_EQ(out.values, (std::vector<double>{0.0, 1.0, 2.0, 3.0, 4.0}));
}

TEST(Traces, ResampleCoarser) {
  const auto out = resample(series("2023-01-01T00:00:00Z", 0.5, {10.0, 20.0, 10.0}), 1.0);
  EXPECT_EQ(out.values, (std::vector<double>{10.0, 10.0}));
}

TEST(Traces, ResampleIdentity) {
  const auto ts = series("2023-01-01T00:00:00Z", 0.25, {3.0, 1.0, 4.0, 1.0, 5.0});
  EXPECT_EQ(resample(ts, 0.25), ts);
  EXPECT_THROW(resample(ts, 0.0), DomainError);
}

TEST(Traces, SampleAtOutsideWindow) {
  const auto ts = series("2023-01-01T00:00:00Z", 1.0, {0.0, 2.0});
  EXPECT_EQ(sample_at(ts, ts.start + 30min), 1.0);
  EXPECT_THROW(sample_at(ts, ts.start - 1s), DomainError);
  EXPECT_THROW(sample_at(ts, ts.end() + 1s), DomainError);
}

TEST(Traces, AlignPassThrough) {
  const auto w = series("2023-01-01T00:00:00Z", 1.0, {1, 2, 3});
  const auto c = series("2023-01-01T00:00:00Z", 1.0, {100, 200, 300}, TraceKind::carbon_intensity);
  const auto u = series("2023-01-01T00:00:00Z", 1.0, {0.1, 0.2, 0.3}, TraceKind::workload);
  const auto a = align(w, c, u, 1.0, 3);
  EXPECT_EQ(a.horizon, 3u);
  EXPECT_EQ(a.weather, w.values);
  EXPECT_EQ(a.carbon_intensity, c.values);
  EXPECT_EQ(a.workload, u.values);
  EXPECT_EQ(overlap_steps(w, c, u, 1.0), 3u);
}

TEST(Traces, AlignStartsAtLatestStart) {
  const auto w = series("2023-01-01T00:00:00Z", 1.0, {1, 2, 3, 4});
  const auto c = series("2023-01-01T00:00:00Z", 1.0, {100, 200, 300, 400}, TraceKind::carbon_intensity);
  const auto u = series("2023-01-01T01:00:00Z", 1.0, {0.1, 0.2, 0.3}, TraceKind::workload);
  const auto a = align(w, c, u, 1.0, 2);
  EXPECT_EQ(a.start, u.start);
  EXPECT_EQ(a.weather, (std::vector<double>{2, 3}));
  EXPECT_EQ(a.carbon_intensity, (std::vector<double>{200, 300}));
  EXPECT_EQ(a.workload, (std::vector<double>{0.1, 0.2}));
}

TEST(Traces, AlignResamplesToRequestedStep) {
  const auto w = series("2023-01-01T00:00:00Z", 1.0, {0, 4});
  const auto c = series("2023-01-01T00:00:00Z", 0.5, {0, 100, 200}, TraceKind::carbon_intensity);
  const auto u = series("2023-01-01T00:00:00Z", 0.25, {0, 0.25, 0.5, 0.75, 1.0}, TraceKind::workload);
  const auto a = align(w, c, u, 0.25, 5);
  EXPECT_EQ(a.weather, (std::vector<double>{0, 1, 2, 3, 4}));
  EXPECT_EQ(a.carbon_intensity, (std::vector<double>{0, 50, 100, 150, 200}));
  EXPECT_EQ(a.workload, u.values);
}

TEST(Traces, AlignErrors) {
  const auto w = series("2023-01-01T00:00:00Z", 1.0, {1, 2});
  const auto c = series("2023-01-01T00:00:00Z", 1.0, {1, 2}, TraceKind::carbon_intensity);
  const auto late = series("2023-02-01T00:00:00Z", 1.0, {0.1, 0.2}, TraceKind::workload);
  EXPECT_THROW(align(w, c, late, 1.0, 1), AlignError);
  const auto u = series("2023-01-01T00:00:00Z", 1.0, {0.1, 0.2}, TraceKind::workload);
  try {
    align(w, c, u, 1.0, 5);
    FAIL();
  } catch (const AlignError& e) {
    EXPECT_NE(std::string(e.what()).find("2 steps"), std::string::npos) << e.what();
  }
}

TEST(Traces, SynthDiurnalExact) {
  DiurnalParams p;
  p.mean = 200.0;
  p.amplitude = 100.0;
  p.period_hours = 24.0;
  p.step_hours = 6.0;
  p.horizon = 5;
  const auto ts = synth_diurnal(TraceKind::carbon_intensity, p);
  const std::vector<double> expected{200, 300, 200, 100, 200};
  ASSERT_EQ(ts.values.size(), 5u);
  for (std::size_t i = 0; i < 5; ++i) EXPECT_NEAR(ts.values[i], expected[i], 1e-9);
}

TEST(Traces, SynthConstantAndSeeded) {
  DiurnalParams p;
  p.mean = 0.4;
  const auto flat = synth_diurnal(TraceKind::workload, p);
  for (double v : flat.values) EXPECT_EQ(v, 0.4);

  p.amplitude = 0.3;
  p.noise_std = 5.0;
  p.seed = 11;
  const auto a = synth_diurnal(TraceKind::workload, p);
  const auto b = synth_diurnal(TraceKind::workload, p);
  EXPECT_EQ(a, b);
  for (double v : a.values) {
    EXPECT_GE(v, 0.0);
    EXPECT_LE(v, 1.0);
  }
  p.seed = 12;
  EXPECT_NE(synth_diurnal(TraceKind::workload, p).values, a.values);
}
