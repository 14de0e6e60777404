#include "ethrisk/planner.hpp"

#include <algorithm>
#include <cmath>

#include "ethrisk/errors.hpp"

namespace ethrisk {
namespace {

constexpr double kSingularDeterminant = 1e-14;

double to_unit(double value, double hi) { return hi > 0.0 ? 2.0 * value / hi - 1.0 : -1.0; }
double from_unit(double value, double hi) { return 0.5 * (std::clamp(value, -1.0, 1.0) + 1.0) * hi; }

void check_horizon(double horizon, double min_horizon) {
  if (!(horizon >= min_horizon) || !std::isfinite(horizon)) {
    throw DegenerateHorizon("planning horizon shorter than the minimum step");
  }
}

double det3(const std::array<std::array<double, 3>, 3>& m) {
  return m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) -
         m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0]) +
         m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
}

}  // namespace

PlanAction clamp_action(const PlanAction& action, const ActionBounds& bounds) {
  return {std::clamp(action.horizon, 0.0, bounds.max_horizon),
          std::clamp(action.lateral_target, 0.0, bounds.max_lateral),
          std::clamp(action.target_speed, 0.0, bounds.max_speed)};
}

std::array<double, 3> normalize_action(const PlanAction& action, const ActionBounds& bounds) {
  const PlanAction a = clamp_action(action, bounds);
  return {to_unit(a.horizon, bounds.max_horizon), to_unit(a.lateral_target, bounds.max_lateral),
          to_unit(a.target_speed, bounds.max_speed)};
}

PlanAction denormalize_action(const std::array<double, 3>& normalized, const ActionBounds& bounds) {
  return {from_unit(normalized[0], bounds.max_horizon), from_unit(normalized[1], bounds.max_lateral),
          from_unit(normalized[2], bounds.max_speed)};
}

QuarticCoefficients solve_longitudinal(double l0, double l0_dot, double l0_ddot,
                                       double target_speed, double horizon,
                                       double terminal_accel, double min_horizon) {
  check_horizon(horizon, min_horizon);
  const double T = horizon;
  const double T2 = T * T;
  const double T3 = T2 * T;
  // [3T^2 4T^3; 6T 12T^2] [a3 a4]^T = [r1 r2]^T
  const double r1 = target_speed - l0_dot - l0_ddot * T;
  const double r2 = terminal_accel - l0_ddot;
  const double det = 3.0 * T2 * 12.0 * T2 - 4.0 * T3 * 6.0 * T;
  if (std::abs(det) < kSingularDeterminant) throw DegenerateHorizon("singular longitudinal system");
  const double a3 = (r1 * 12.0 * T2 - 4.0 * T3 * r2) / det;
  const double a4 = (3.0 * T2 * r2 - 6.0 * T * r1) / det;
  return {l0, l0_dot, 0.5 * l0_ddot, a3, a4};
}

QuinticCoefficients solve_lateral(double d0, double d0_dot, double d0_ddot, double lateral_target,
                                  double horizon, double min_horizon) {
  check_horizon(horizon, min_horizon);
  const double T = horizon;
  const double T2 = T * T;
  const double T3 = T2 * T;
  const double T4 = T3 * T;
  const double T5 = T4 * T;
  const double b0 = d0;
  const double b1 = d0_dot;
  const double b2 = 0.5 * d0_ddot;
  const std::array<std::array<double, 3>, 3> m = {{
      {T3, T4, T5},
      {3.0 * T2, 4.0 * T3, 5.0 * T4},
      {6.0 * T, 12.0 * T2, 20.0 * T3},
  }};
  const std::array<double, 3> rhs = {lateral_target - b0 - b1 * T - b2 * T2, -b1 - 2.0 * b2 * T,
                                     -2.0 * b2};
  const double det = det3(m);
  if (std::abs(det) < kSingularDeterminant) throw DegenerateHorizon("singular lateral system");

  std::array<double, 3> solution{};
  for (int col = 0; col < 3; ++col) {
    auto replaced = m;
    for (int row = 0; row < 3; ++row) replaced[row][col] = rhs[row];
    solution[col] = det3(replaced) / det;
  }
  return {b0, b1, b2, solution[0], solution[1], solution[2]};
}

double eval_poly(std::span<const double> coeffs, double tau, int derivative) {
  const int n = static_cast<int>(coeffs.size());
  double result = 0.0;
  for (int k = n - 1; k >= derivative; --k) {
    double factor = 1.0;
    for (int j = 0; j < derivative; ++j) factor *= static_cast<double>(k - j);
    result = result * tau + factor * coeffs[k];
  }
  return result;
}

std::span<const PlanSample> TrajectoryPlan::planned_steps() const {
  if (samples.size() <= 1) return samples;
  return std::span<const PlanSample>(samples).subspan(1);
}

TrajectoryPlan sample_plan(const QuarticCoefficients& longitudinal,
                           const QuinticCoefficients& lateral, double horizon, double dt) {
  TrajectoryPlan plan;
  plan.longitudinal = longitudinal;
  plan.lateral = lateral;
  plan.horizon = std::max(horizon, 0.0);
  plan.dt = dt;

  const int intervals =
      plan.horizon > 0.0 ? static_cast<int>(std::ceil(plan.horizon / dt - 1e-9)) : 0;
  plan.samples.reserve(static_cast<std::size_t>(intervals) + 1);
  for (int k = 0; k <= intervals; ++k) {
    const double tau = k == intervals ? plan.horizon : k * dt;
    PlanSample s;
    s.tau = tau;
    s.l = eval_poly(longitudinal, tau, 0);
    s.l_dot = eval_poly(longitudinal, tau, 1);
    s.l_ddot = eval_poly(longitudinal, tau, 2);
    s.l_jerk = eval_poly(longitudinal, tau, 3);
    s.d = eval_poly(lateral, tau, 0);
    s.d_dot = eval_poly(lateral, tau, 1);
    s.d_ddot = eval_poly(lateral, tau, 2);
    plan.samples.push_back(s);
  }
  return plan;
}

TrajectoryPlan make_plan(const FrenetState& initial, const PlanAction& action, double dt) {
  if (action.horizon < dt) {
    // Hold the current state for one sample.
    const QuarticCoefficients lon = {initial.l, initial.l_dot, 0.5 * initial.l_ddot, 0.0, 0.0};
    const QuinticCoefficients lat = {initial.d, initial.d_dot, 0.5 * initial.d_ddot, 0.0, 0.0, 0.0};
    return sample_plan(lon, lat, 0.0, dt);
  }
  const auto lon = solve_longitudinal(initial.l, initial.l_dot, initial.l_ddot,
                                      action.target_speed, action.horizon, 0.0, dt);
  const auto lat = solve_lateral(initial.d, initial.d_dot, initial.d_ddot, action.lateral_target,
                                 action.horizon, dt);
  return sample_plan(lon, lat, action.horizon, dt);
}

double longitudinal_jerk_sum(const TrajectoryPlan& plan) {
  const auto steps = plan.planned_steps();
  double sum = 0.0;
  for (const PlanSample& s : steps) sum += std::abs(s.l_jerk);
  return static_cast<double>(steps.size()) * sum;
}

}  // namespace ethrisk
