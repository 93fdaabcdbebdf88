#pragma once

#include <filesystem>
#include <memory>
#include <random>
#include <string>

#include "dctwin/baselines.hpp"
#include "dctwin/config.hpp"
#include "dctwin/env.hpp"
#include "dctwin/traces.hpp"

namespace dctwin::testing {

inline AlignedTraces constant_traces(std::size_t horizon, double ambient, double ci, double util,
                                     double step_hours = 0.25) {
  AlignedTraces tr;
  tr.start = DiurnalParams::default_trace_start();
  tr.step_hours = step_hours;
  tr.horizon = horizon;
  tr.weather.assign(horizon, ambient);
  tr.carbon_intensity.assign(horizon, ci);
  tr.workload.assign(horizon, util);
  return tr;
}

// Uniform random traces inside the documented ranges.
inline AlignedTraces random_traces(std::size_t horizon, std::mt19937_64& rng, double step_hours = 0.25) {
  std::uniform_real_distribution<double> amb(-5.0, 40.0), ci(0.0, 800.0), u(0.0, 1.0);
  AlignedTraces tr = constant_traces(horizon, 0.0, 0.0, 0.0, step_hours);
  for (std::size_t i = 0; i < horizon; ++i) {
    tr.weather[i] = amb(rng);
    tr.carbon_intensity[i] = ci(rng);
    tr.workload[i] = u(rng);
  }
  return tr;
}

inline AgentActions random_actions(std::mt19937_64& rng) {
  return decode(std::uniform_int_distribution<int>(0, kJointActionCount - 1)(rng));
}

// Fresh directory under the system temp dir, removed on destruction.
class TempDir {
 public:
  explicit TempDir(const std::string& tag) {
    std::random_device rd;
    path_ = std::filesystem::temp_directory_path() / ("dctwin_" + tag + "_" + std::to_string(rd()));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  std::string file(const std::string& name) const { return (path_ / name).string(); }
  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
};

}  // namespace dctwin::testing
