#include "ethrisk/reward.hpp"

#include <cmath>
#include <stdexcept>

namespace ethrisk {

std::string_view to_string(TerminalEvent event) {
  switch (event) {
    case TerminalEvent::kNone:
      return "none";
    case TerminalEvent::kSuccess:
      return "success";
    case TerminalEvent::kOutOfRoad:
      return "out_of_road";
    case TerminalEvent::kCollisionVehicle:
      return "collision_vehicle";
    case TerminalEvent::kCollisionVru:
      return "collision_vru";
    case TerminalEvent::kTimeout:
      return "timeout";
  }
  return "none";
}

double terminal_reward(TerminalEvent event, const RewardConfig& config) {
  switch (event) {
    case TerminalEvent::kSuccess:
      return config.success;
    case TerminalEvent::kOutOfRoad:
      return config.out_of_road;
    case TerminalEvent::kCollisionVehicle:
      return config.collision_vehicle;
    case TerminalEvent::kCollisionVru:
      return config.collision_vru;
    case TerminalEvent::kNone:
    case TerminalEvent::kTimeout:
      return 0.0;
  }
  return 0.0;
}

RewardBreakdown step_reward(const TrajectoryPlan& plan, double progress, int direction,
                            TerminalEvent event, const RewardConfig& config) {
  if (direction != 1 && direction != -1) throw std::invalid_argument("direction must be +1 or -1");
  const double rho = static_cast<double>(direction);
  RewardBreakdown r;
  for (const PlanSample& s : plan.planned_steps()) {
    const double v = std::hypot(s.l_dot, s.d_dot);
    const double r_v = (1.0 - std::abs(v - config.desired_speed) / config.desired_speed) * rho;
    const double r_p = progress * rho;
    r.speed += config.w_speed * r_v;
    r.progress += config.w_progress * r_p;
  }
  r.jerk = config.w_jerk * (-0.1 * longitudinal_jerk_sum(plan));
  r.terminal = terminal_reward(event, config);
  r.total = r.speed + r.progress + r.jerk + r.terminal;
  return r;
}

}  // namespace ethrisk
