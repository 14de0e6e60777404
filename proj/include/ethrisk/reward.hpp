#pragma once

#include <string_view>

#include "ethrisk/planner.hpp"

namespace ethrisk {

enum class TerminalEvent {
  kNone,
  kSuccess,
  kOutOfRoad,
  kCollisionVehicle,
  kCollisionVru,
  kTimeout,
};

std::string_view to_string(TerminalEvent event);

struct RewardConfig {
  double w_speed = 0.7;
  double w_progress = 0.1;
  double w_jerk = 0.05;
  double desired_speed = 0.9 * 22.22;  // m/s
  double success = 25.0;
  double out_of_road = -15.0;
  double collision_vehicle = -10.0;
  double collision_vru = -15.0;
};

// One-time reward for a terminal event; 0 for none and timeout.
double terminal_reward(TerminalEvent event, const RewardConfig& config);

struct RewardBreakdown {
  double speed = 0.0;     // sum over planned steps of w_v * r_v
  double progress = 0.0;  // sum over planned steps of w_p * r_p
  double jerk = 0.0;      // w_tr * (-0.1 * n * sum |l'''|)
  double terminal = 0.0;
  double total = 0.0;     // speed + progress + jerk + terminal

  bool operator==(const RewardBreakdown&) const = default;
};

// `progress` is the arclength gained per step, `direction` +1 or -1.
RewardBreakdown step_reward(const TrajectoryPlan& plan, double progress, int direction,
                            TerminalEvent event, const RewardConfig& config = {});

}  // namespace ethrisk
