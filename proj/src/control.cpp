#include "ethrisk/control.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace ethrisk {

void PidGains::validate() const {
  if (!(kp >= 0.0 && ki >= 0.0 && kd >= 0.0)) throw std::invalid_argument("PID gains must be >= 0");
  if (!(integral_clamp > 0.0 && output_clamp > 0.0)) {
    throw std::invalid_argument("PID clamps must be positive");
  }
}

PidOutput pid_acceleration(const PidGains& gains, double error, const PidState& state, double dt) {
  PidOutput out;
  out.state.integral =
      std::clamp(state.integral + error * dt, -gains.integral_clamp, gains.integral_clamp);
  const double derivative = state.primed ? (error - state.previous_error) / dt : 0.0;
  out.state.previous_error = error;
  out.state.primed = true;
  const double raw = gains.kp * error + gains.ki * out.state.integral + gains.kd * derivative;
  out.accel = std::clamp(raw, -gains.output_clamp, gains.output_clamp);
  return out;
}

void StanleyParams::validate() const {
  if (!(k_v > 0.0)) throw std::invalid_argument("Stanley gain must be positive");
  if (!(speed_floor > 0.0)) throw std::invalid_argument("Stanley speed floor must be positive");
  if (!(steering_limit > 0.0)) throw std::invalid_argument("steering limit must be positive");
}

double stanley_steer(const StanleyParams& params, double heading_error, double cross_track,
                     double speed) {
  const double delta =
      heading_error + std::atan(params.k_v * cross_track / std::max(speed, params.speed_floor));
  return std::clamp(delta, -params.steering_limit, params.steering_limit);
}

VehicleModel step_vehicle(const VehicleModel& model, double accel, double steer, double dt) {
  VehicleModel next = model;
  next.yaw_rate = model.speed * std::tan(steer) / model.wheelbase;
  next.position = model.position + unit_from_angle(model.heading) * (model.speed * dt);
  next.heading = wrap_angle(model.heading + next.yaw_rate * dt);
  next.speed = std::clamp(model.speed + accel * dt, 0.0, model.max_speed);
  return next;
}

namespace {

// Plan sample at arclength l, linearly interpolated between grid points.
PlanSample sample_at_arclength(const TrajectoryPlan& plan, double l) {
  const auto& s = plan.samples;
  if (l <= s.front().l) return s.front();
  for (std::size_t k = 1; k < s.size(); ++k) {
    if (l <= s[k].l) {
      const double span = s[k].l - s[k - 1].l;
      const double t = span > 0.0 ? (l - s[k - 1].l) / span : 1.0;
      PlanSample out = s[k - 1];
      out.d = s[k - 1].d + (s[k].d - s[k - 1].d) * t;
      out.l_dot = s[k - 1].l_dot + (s[k].l_dot - s[k - 1].l_dot) * t;
      out.d_dot = s[k - 1].d_dot + (s[k].d_dot - s[k - 1].d_dot) * t;
      out.l = l;
      return out;
    }
  }
  return s.back();
}

double speed_target(const TrajectoryPlan& plan, double tau) {
  if (plan.samples.size() == 1) return plan.samples.front().l_dot;
  return eval_poly(plan.longitudinal, std::min(tau, plan.horizon), 1);
}

}  // namespace

std::vector<ControlRecord> track_plan(VehicleModel& model, const TrajectoryPlan& plan,
                                      const ReferencePath& path, const TrackerConfig& config,
                                      PidState& pid, int steps, double dt) {
  std::vector<ControlRecord> trace;
  if (plan.samples.empty() || steps <= 0) return trace;
  trace.reserve(static_cast<std::size_t>(steps));

  const int substeps =
      std::max(1, static_cast<int>(std::lround(dt / model.integration_step)));
  const double h = dt / substeps;

  for (int k = 0; k < steps; ++k) {
    const FrenetState front = project_to_frenet(
        path, CartesianPose{model.front_axle(), model.heading, model.speed, 0.0},
        config.projection);
    const PlanSample target = sample_at_arclength(plan, front.l);
    const double path_heading = path_heading_curvature(path, std::clamp(front.l, 0.0, path.length())).heading;
    const double plan_heading =
        path_heading + (target.l_dot != 0.0 || target.d_dot != 0.0
                            ? std::atan2(target.d_dot, target.l_dot)
                            : 0.0);
    const double cross_track = target.d - front.d;
    const double heading_error = wrap_angle(plan_heading - model.heading);
    const double steer = stanley_steer(config.stanley, heading_error, cross_track, model.speed);

    const double v_target = speed_target(plan, (k + 1) * dt);
    const PidOutput pid_out = pid_acceleration(config.pid, v_target - model.speed, pid, dt);
    pid = pid_out.state;

    for (int i = 0; i < substeps; ++i) model = step_vehicle(model, pid_out.accel, steer, h);

    ControlRecord rec;
    rec.time = (k + 1) * dt;
    rec.position = model.position;
    rec.heading = model.heading;
    rec.speed = model.speed;
    rec.yaw_rate = model.yaw_rate;
    rec.accel = pid_out.accel;
    rec.steer = steer;
    rec.cross_track = cross_track;
    trace.push_back(rec);
  }
  return trace;
}

}  // namespace ethrisk
