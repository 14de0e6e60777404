#pragma once

#include <vector>

#include "ethrisk/frenet.hpp"
#include "ethrisk/math.hpp"
#include "ethrisk/planner.hpp"

namespace ethrisk {

struct PidGains {
  double kp = 1.2;
  double ki = 0.1;
  double kd = 0.05;
  double integral_clamp = 10.0;  // m/s * s
  double output_clamp = 4.0;     // m/s^2

  void validate() const;
};

struct PidState {
  double integral = 0.0;
  double previous_error = 0.0;
  bool primed = false;  // false until the first update; no derivative kick
};

struct PidOutput {
  double accel = 0.0;
  PidState state;
};

// a = Kp e + Ki sum(e dt) + Kd de/dt, rectangular integration including the
// current sample. The integral is clamped before use, the output after.
PidOutput pid_acceleration(const PidGains& gains, double error, const PidState& state, double dt);

struct StanleyParams {
  double k_v = 2.0;             // 1/s
  double steering_limit = 0.6;  // rad
  double speed_floor = 1.0;     // m/s

  void validate() const;
};

// heading_error + atan(k_v * cross_track / max(v, floor)), clamped. Positive
// cross_track means the reference lies to the left of the front axle.
double stanley_steer(const StanleyParams& params, double heading_error, double cross_track,
                     double speed);

// Kinematic bicycle referenced at the rear axle.
struct VehicleModel {
  double wheelbase = 2.8;
  Vec2 position;
  double heading = 0.0;
  double speed = 0.0;
  double yaw_rate = 0.0;
  double max_speed = 22.22;
  double integration_step = 0.01;

  Vec2 front_axle() const { return position + unit_from_angle(heading) * wheelbase; }
};

// One forward-Euler step of length dt.
VehicleModel step_vehicle(const VehicleModel& model, double accel, double steer, double dt);

struct TrackerConfig {
  PidGains pid;
  StanleyParams stanley;
  ProjectionOptions projection;
};

struct ControlRecord {
  double time = 0.0;  // end of the step, relative to the plan start
  Vec2 position;
  double heading = 0.0;
  double speed = 0.0;
  double yaw_rate = 0.0;
  double accel = 0.0;        // commanded, held over the step
  double steer = 0.0;        // commanded, held over the step
  double cross_track = 0.0;  // at the front axle, before the step
};

// Closed-loop tracking of `plan` for `steps` controller periods of dt. Each
// period computes one {accel, steer} command from the current state and
// integrates the vehicle with its own integration step. Targets past the plan
// end hold the terminal state. An empty plan yields an empty trace.
std::vector<ControlRecord> track_plan(VehicleModel& model, const TrajectoryPlan& plan,
                                      const ReferencePath& path, const TrackerConfig& config,
                                      PidState& pid, int steps, double dt = kSimulationStep);

}  // namespace ethrisk
