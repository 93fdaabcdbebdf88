#include <gtest/gtest.h>

#include <algorithm>
#include <random>

#include "dctwin/error.hpp"
#include "dctwin/hvac_plant.hpp"
#include "dctwin/it_thermal.hpp"

using namespace dctwin;

namespace {

DataCenterConfig single_cabinet(double airflow_ref) {
  auto cfg = default_config();
  cfg.room.rows = 1;
  cfg.room.cabinets_per_row = 1;
  cfg.room.cabinets = {CabinetSpec{1, 2.0, airflow_ref}};
  return cfg;
}

}  // namespace

TEST(ItThermal, FanRatioKnees) {
  const ServerSpec s;
  EXPECT_DOUBLE_EQ(fan_ratio(18.0, s), 0.3);
  EXPECT_DOUBLE_EQ(fan_ratio(27.0, s), 1.0);
  EXPECT_DOUBLE_EQ(fan_ratio(22.5, s), 0.65);
  EXPECT_DOUBLE_EQ(fan_ratio(0.0, s), 0.3);
  EXPECT_DOUBLE_EQ(fan_ratio(50.0, s), 1.0);
  ServerSpec floor_high;
  floor_high.fan_min_ratio = 0.5;
  EXPECT_DOUBLE_EQ(fan_ratio(18.0, floor_high), 0.5);
}

TEST(ItThermal, ServerPower) {
  const ServerSpec s;
  auto p = server_power(0.0, 18.0, s);
  EXPECT_DOUBLE_EQ(p.cpu, 100.0);
  EXPECT_NEAR(p.fan, 0.675, 1e-12);
  p = server_power(1.0, 27.0, s);
  EXPECT_DOUBLE_EQ(p.cpu, 300.0);
  EXPECT_DOUBLE_EQ(p.fan, 25.0);
  p = server_power(0.5, 22.5, s);
  EXPECT_DOUBLE_EQ(p.cpu, 200.0);
  EXPECT_NEAR(p.fan, 6.865624999999998, 1e-12);
  EXPECT_THROW(server_power(-0.01, 20.0, s), DomainError);
  EXPECT_THROW(server_power(1.01, 20.0, s), DomainError);
}

TEST(ItThermal, CpuAffineInUtilization) {
  const ServerSpec s;
  const double a = server_power(0.1, 20.0, s).cpu, b = server_power(0.4, 20.0, s).cpu,
               c = server_power(0.7, 20.0, s).cpu;
  EXPECT_NEAR(b - a, c - b, 1e-12);
  EXPECT_LT(a, b);
}

TEST(ItThermal, RoomIdleAtLowestSetpoint) {
  auto cfg = default_config();
  for (auto& c : cfg.room.cabinets) c.inlet_offset = 0.0;
  const auto r = room_step(cfg, 18.0, 0.0);
  EXPECT_DOUBLE_EQ(r.cpu_power, 16000.0);
  EXPECT_NEAR(r.fan_power, 108.0, 1e-9);
  EXPECT_DOUBLE_EQ(r.it_power, r.cpu_power + r.fan_power);
}

TEST(ItThermal, SingleCabinetChain) {
  auto r = room_step(single_cabinet(1.0), 18.0, 1.0);
  ASSERT_EQ(r.outlet_temps.size(), 1u);
  EXPECT_DOUBLE_EQ(r.inlet_temps[0], 20.0);
  EXPECT_NEAR(r.it_power, 302.36354595336076, 1e-9);
  EXPECT_NEAR(r.outlet_temps[0], 20.660422743254518, 1e-9);

  r = room_step(single_cabinet(0.4556), 18.0, 1.0);
  EXPECT_NEAR(r.outlet_temps[0], 21.449567039628004, 1e-9);
}

TEST(ItThermal, DefaultRoomOperatingPoint) {
  const auto r = room_step(default_config(), 22.0, 0.7);
  EXPECT_NEAR(r.it_power, 40297.92592592593, 1e-6);
  EXPECT_NEAR(r.cpu_power, 38400.0, 1e-9);
  EXPECT_NEAR(r.fan_power, 1897.9259259259256, 1e-6);
  EXPECT_NEAR(r.return_temp, 30.650576808881834, 1e-9);
  EXPECT_NEAR(r.crac_flow_ratio, 0.7685005975838578, 1e-12);
}

TEST(ItThermal, RoomInvariants) {
  const auto cfg = default_config();
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> sp(18.0, 27.0), u(0.0, 1.0);
  for (int i = 0; i < 500; ++i) {
    const double s = sp(rng);
    const auto r = room_step(cfg, s, u(rng));
    double heat = 0.0;
    for (double q : r.cabinet_heat) heat += q;
    EXPECT_NEAR(heat, r.it_power, 1e-9 * r.it_power);
    for (std::size_t c = 0; c < r.inlet_temps.size(); ++c) {
      EXPECT_GE(r.inlet_temps[c], s);
      EXPECT_GE(r.outlet_temps[c], r.inlet_temps[c]);
    }
    const auto [lo, hi] = std::minmax_element(r.outlet_temps.begin(), r.outlet_temps.end());
    EXPECT_GE(r.return_temp, *lo - 1e-12);
    EXPECT_LE(r.return_temp, *hi + 1e-12);
    EXPECT_GT(r.crac_flow_ratio, 0.0);
    EXPECT_LE(r.crac_flow_ratio, 1.0);
  }
  EXPECT_GT(room_step(cfg, 20.0, 0.7).return_temp, 20.0);
  EXPECT_THROW(room_step(cfg, 17.0, 0.5), DomainError);
  EXPECT_THROW(room_step(cfg, 20.0, 1.5), DomainError);
}

TEST(ItThermal, ItPowerMonotoneInUtilizationAndSetpoint) {
  const auto cfg = default_config();
  double prev = 0.0;
  for (int i = 0; i <= 100; ++i) {
    const double p = room_step(cfg, 22.0, i / 100.0).it_power;
    EXPECT_GE(p, prev);
    prev = p;
  }
  prev = 0.0;
  for (int i = 0; i <= 90; ++i) {
    const double p = room_step(cfg, 18.0 + i / 10.0, 0.5).it_power;
    EXPECT_GE(p, prev);
    prev = p;
  }
}

TEST(ItThermal, HotspotGrid) {
  const auto cfg = default_config();
  const auto r = room_step(cfg, 18.0, 0.0);
  const auto g = hotspot_grid(cfg, r);
  EXPECT_EQ(g.rows, 2);
  EXPECT_EQ(g.cols, 4);
  EXPECT_EQ(g.inlet, r.inlet_temps);
  EXPECT_EQ(g.outlet, r.outlet_temps);
  EXPECT_DOUBLE_EQ(*std::min_element(g.inlet.begin(), g.inlet.end()), 18.0);
  EXPECT_DOUBLE_EQ(g.inlet_at(1, 3), 22.0);
  EXPECT_DOUBLE_EQ(g.inlet_at(0, 1), r.inlet_temps[1]);

  auto uniform = cfg;
  for (auto& c : uniform.room.cabinets) c.inlet_offset = 1.5;
  const auto gu = hotspot_grid(uniform, room_step(uniform, 20.0, 0.3));
  for (double v : gu.inlet) EXPECT_DOUBLE_EQ(v, 21.5);

  auto bad = r;
  bad.inlet_temps.pop_back();
  EXPECT_THROW(hotspot_grid(cfg, bad), DomainError);
}

TEST(ItThermal, GridSerialization) {
  TemperatureGrid g{1, 2, {18.0, 19.5}, {20.25, 21.0}};
  EXPECT_EQ(grid_to_json(g), R"({"rows":1,"cols":2,"inlet":[18.0,19.5],"outlet":[20.25,21.0]})");
  EXPECT_EQ(grid_to_csv(g, GridField::inlet), "18.0,19.5\n");
  EXPECT_EQ(grid_to_csv(g, GridField::outlet), "20.25,21.0\n");

  const auto cfg = default_config();
  const auto csv = grid_to_csv(hotspot_grid(cfg, room_step(cfg, 22.0, 0.5)), GridField::inlet);
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 2);
  const auto first_line = csv.substr(0, csv.find('\n'));
  EXPECT_EQ(std::count(first_line.begin(), first_line.end(), ','), 3);
}

TEST(HvacPlant, CracFanAffinity) {
  const HvacSpec h;
  EXPECT_DOUBLE_EQ(crac_fan_power(1.0, h), 2000.0);
  EXPECT_DOUBLE_EQ(crac_fan_power(0.5, h), 250.0);
  EXPECT_DOUBLE_EQ(crac_fan_power(0.0, h), 0.0);
  EXPECT_THROW(crac_fan_power(1.2, h), DomainError);
  EXPECT_THROW(crac_fan_power(-0.1, h), DomainError);
}

TEST(HvacPlant, ChillerCop) {
  const HvacSpec h;
  EXPECT_DOUBLE_EQ(chiller_cop(15.0, 22.0, h), 6.0);
  EXPECT_NEAR(chiller_cop(35.0, 18.0, h), 2.2, 1e-12);
  EXPECT_DOUBLE_EQ(chiller_cop(45.0, 18.0, h), 2.0);
  EXPECT_DOUBLE_EQ(chiller_cop(-40.0, 27.0, h), 8.0);
}

TEST(HvacPlant, FormulaChain) {
  const HvacSpec h;
  auto p = plant_step(60000.0, 1.0, 15.0, 22.0, h);
  EXPECT_DOUBLE_EQ(p.crac_fan_power, 2000.0);
  EXPECT_NEAR(p.chiller_power, 10333.333333333334, 1e-9);
  EXPECT_NEAR(p.cooling_tower_power, 2170.0, 1e-9);
  EXPECT_DOUBLE_EQ(p.pump_power, 500.0);
  EXPECT_NEAR(p.total, 15003.333333333334, 1e-9);
  EXPECT_DOUBLE_EQ(p.cop_effective, 6.0);

  p = plant_step(60000.0, 1.0, 35.0, 18.0, h);
  EXPECT_NEAR(p.chiller_power, 28181.81818181818, 1e-9);
  EXPECT_NEAR(p.total, 33387.27272727273, 1e-9);

  p = plant_step(0.0, 0.0, 25.0, 22.0, h);
  EXPECT_EQ(p.total, 0.0);
  EXPECT_EQ(p.pump_power, 0.0);
  EXPECT_THROW(plant_step(-1.0, 0.5, 25.0, 22.0, h), DomainError);
}

TEST(HvacPlant, ComponentsSumAndBounds) {
  const HvacSpec h;
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> q(0.0, 1e5), f(0.0, 1.0), amb(-20.0, 50.0), sp(18.0, 27.0);
  for (int i = 0; i < 1000; ++i) {
    const double qi = q(rng);
    const auto p = plant_step(qi, f(rng), amb(rng), sp(rng), h);
    EXPECT_DOUBLE_EQ(p.total, p.crac_fan_power + p.chiller_power + p.cooling_tower_power + p.pump_power);
    EXPECT_GE(p.cop_effective, h.cop_min);
    EXPECT_LE(p.cop_effective, h.cop_max);
    EXPECT_GE(p.crac_fan_power, 0.0);
    EXPECT_GE(p.chiller_power, 0.0);
    EXPECT_GE(p.cooling_tower_power, 0.0);
    if (qi > 0.0) EXPECT_GE((qi + p.total) / qi, 1.0);
  }
}

TEST(HvacPlant, ChillerMonotoneInAmbientAndSetpoint) {
  const HvacSpec h;
  double prev = 0.0;
  for (int i = 0; i <= 700; ++i) {
    const double c = plant_step(40000.0, 0.6, -20.0 + i / 10.0, 22.0, h).chiller_power;
    EXPECT_GE(c, prev);
    prev = c;
  }
  prev = 1e18;
  for (int i = 0; i <= 90; ++i) {
    const double c = plant_step(40000.0, 0.6, 30.0, 18.0 + i / 10.0, h).chiller_power;
    EXPECT_LE(c, prev);
    prev = c;
  }
}
