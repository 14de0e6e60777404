#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "ethrisk/control.hpp"
#include "support/oracles.hpp"

namespace ethrisk {
namespace {

TEST(Pid, PureProportional) {
  const PidGains g{1.5, 0.0, 0.0, 10.0, 4.0};
  EXPECT_DOUBLE_EQ(pid_acceleration(g, 2.0, {}, 0.1).accel, 3.0);
}

TEST(Pid, ZeroErrorStaysZero) {
  PidState s;
  for (int i = 0; i < 50; ++i) {
    const auto out = pid_acceleration(PidGains{}, 0.0, s, 0.1);
    EXPECT_EQ(out.accel, 0.0);
    s = out.state;
  }
}

TEST(Pid, RectangularIntegration) {
  const PidGains g{1.0, 0.5, 0.0, 10.0, 4.0};
  PidState s;
  double a = 0.0;
  for (int i = 0; i < 3; ++i) {
    const auto out = pid_acceleration(g, 1.0, s, 0.1);
    a = out.accel;
    s = out.state;
  }
  EXPECT_NEAR(a, 1.15, 1e-12);
}

TEST(Pid, NoDerivativeKickOnFirstSample) {
  const PidGains g{0.0, 0.0, 1.0, 10.0, 4.0};
  EXPECT_EQ(pid_acceleration(g, 3.0, {}, 0.1).accel, 0.0);
}

TEST(Pid, ClampsIntegralAndOutput) {
  const PidGains g{0.0, 1.0, 0.0, 2.0, 4.0};
  PidState s;
  for (int i = 0; i < 100; ++i) s = pid_acceleration(g, 5.0, s, 0.1).state;
  EXPECT_DOUBLE_EQ(s.integral, 2.0);
  EXPECT_DOUBLE_EQ(pid_acceleration(PidGains{}, 100.0, {}, 0.1).accel, 4.0);
  EXPECT_DOUBLE_EQ(pid_acceleration(PidGains{}, -100.0, {}, 0.1).accel, -4.0);
}

TEST(Pid, RejectsInvalidGains) {
  EXPECT_THROW((PidGains{-1.0, 0, 0, 1, 1}).validate(), std::invalid_argument);
  EXPECT_THROW((PidGains{1.0, 0, 0, 0, 1}).validate(), std::invalid_argument);
}

double steady_state_error(double ki) {
  const PidGains g{1.2, ki, 0.05, 10.0, 4.0};
  PidState s;
  double v = 0.0;
  const double target = 10.0;
  const double drag = -0.5;
  for (int i = 0; i < 3000; ++i) {
    const auto out = pid_acceleration(g, target - v, s, 0.1);
    s = out.state;
    v += (out.accel + drag) * 0.1;
  }
  return std::abs(target - v);
}

TEST(Pid, IntegralActionRemovesSteadyStateError) {
  EXPECT_GT(steady_state_error(0.0), 0.1);
  EXPECT_LT(steady_state_error(0.1), 0.01);
}

TEST(Stanley, Examples) {
  const StanleyParams unit{1.0, 0.6, 1.0};
  EXPECT_EQ(stanley_steer(unit, 0.0, 0.0, 10.0), 0.0);
  EXPECT_NEAR(stanley_steer(unit, 0.1, 1.0, 10.0), 0.1 + std::atan(0.1), 1e-12);
  EXPECT_NEAR(stanley_steer(unit, 0.1, 1.0, 10.0), 0.1997, 1e-4);
  for (const double v : {0.0, 1.0, 10.0, 30.0}) {
    EXPECT_DOUBLE_EQ(stanley_steer(StanleyParams{}, 0.0, 500.0, v), 0.6);
    EXPECT_DOUBLE_EQ(stanley_steer(StanleyParams{}, 0.0, -500.0, v), -0.6);
  }
}

TEST(Stanley, SpeedFloorBoundsGainAtStandstill) {
  const StanleyParams p{2.0, 1.5, 1.0};
  EXPECT_NEAR(stanley_steer(p, 0.0, 0.2, 0.0), std::atan(0.4), 1e-12);
}

TEST(StepVehicle, StraightAdvance) {
  VehicleModel m;
  m.speed = 8.0;
  const VehicleModel n = step_vehicle(m, 0.0, 0.0, 0.1);
  EXPECT_NEAR(n.position.x, 0.8, 1e-12);
  EXPECT_NEAR(n.position.y, 0.0, 1e-12);
  EXPECT_EQ(n.heading, 0.0);
}

TEST(StepVehicle, SpeedClampedToRange) {
  VehicleModel m;
  m.speed = m.max_speed;
  EXPECT_EQ(step_vehicle(m, 3.0, 0.0, 0.1).speed, m.max_speed);
  m.speed = 0.1;
  EXPECT_EQ(step_vehicle(m, -4.0, 0.0, 0.1).speed, 0.0);
}

TEST(StepVehicle, HeadingWraps) {
  VehicleModel m;
  m.speed = 10.0;
  m.heading = std::numbers::pi - 0.01;
  for (int i = 0; i < 50; ++i) {
    m = step_vehicle(m, 0.0, 0.5, 0.01);
    EXPECT_GT(m.heading, -std::numbers::pi);
    EXPECT_LE(m.heading, std::numbers::pi);
  }
}

TEST(StepVehicle, TurningRadiusWithinOnePercent) {
  for (const double steer : {0.1, 0.3, 0.5}) {
    EXPECT_LT(oracle::turning_radius_error(steer, 5.0, 1e-3), 0.01) << steer;
  }
}

TEST(TrackPlan, EmptyPlanGivesEmptyTrace) {
  VehicleModel m;
  PidState pid;
  const std::vector<Vec2> line{{0, 0}, {10, 0}};
  const ReferencePath path(line);
  EXPECT_TRUE(track_plan(m, TrajectoryPlan{}, path, {}, pid, 5).empty());
}

TEST(TrackPlan, EquilibriumOnPlan) {
  std::vector<Vec2> line;
  for (int i = 0; i <= 100; ++i) line.push_back({static_cast<double>(i), 0.0});
  const ReferencePath path(line);
  const TrajectoryPlan plan = make_plan({0.0, 0.0, 10.0, 0.0, 0.0, 0.0}, {2.0, 0.0, 10.0});
  VehicleModel m;
  m.speed = 10.0;
  PidState pid;
  const auto trace = track_plan(m, plan, path, {}, pid, 20);
  ASSERT_EQ(trace.size(), 20u);
  for (const auto& r : trace) {
    EXPECT_LT(std::abs(r.accel), 0.05);
    EXPECT_LT(std::abs(r.steer), 0.01);
  }
}

TEST(TrackPlan, StanleyConvergesFromOneMeterAtTenMps) {
  const auto run = oracle::stanley_lane_keep(1.0, 10.0, 6.0);
  ASSERT_EQ(run.cross_track.size(), 60u);
  EXPECT_LT(std::abs(run.cross_track.back()), 0.05);
  EXPECT_LT(std::abs(run.rear_offset.back()), 0.05);
}

TEST(TrackPlan, StanleyConvergesAcrossSpeeds) {
  for (const double v : {2.0, 5.0, 10.0, 15.0, 20.0}) {
    const auto run = oracle::stanley_lane_keep(1.0, v, 20.0);
    const auto& ct = run.cross_track;
    std::size_t reached = ct.size();
    double peak = 0.0;
    for (std::size_t k = 0; k < ct.size(); ++k) {
      peak = std::max(peak, std::abs(ct[k]));
      if (reached == ct.size() && std::abs(ct[k]) < 0.05) reached = k;
    }
    ASSERT_LT(reached, ct.size()) << v;
    EXPECT_LE(peak, 1.5 * std::abs(ct.front())) << v;
    for (std::size_t k = reached; k < ct.size(); ++k) EXPECT_LT(std::abs(ct[k]), 0.05) << v;
  }
}

}  // namespace
}  // namespace ethrisk
