#pragma once

#include <array>
#include <span>
#include <vector>

#include "ethrisk/frenet.hpp"

namespace ethrisk {

inline constexpr double kSimulationStep = 0.1;  // s

// Decision-level action: horizon T, terminal lateral offset, terminal speed.
struct PlanAction {
  double horizon = 2.0;
  double lateral_target = 0.0;
  double target_speed = 0.0;

  bool operator==(const PlanAction&) const = default;
};

struct ActionBounds {
  double max_horizon = 2.0;
  double max_lateral = 2.25;  // half road width
  double max_speed = 22.22;
};

PlanAction clamp_action(const PlanAction& action, const ActionBounds& bounds);

// Maps each component of a bounded action to [-1, 1] and back.
std::array<double, 3> normalize_action(const PlanAction& action, const ActionBounds& bounds);
PlanAction denormalize_action(const std::array<double, 3>& normalized, const ActionBounds& bounds);

using QuarticCoefficients = std::array<double, 5>;
using QuinticCoefficients = std::array<double, 6>;

// Quartic l(tau) from (l0, l0_dot, l0_ddot) to terminal speed and acceleration
// at T. Throws DegenerateHorizon when T < min_horizon.
QuarticCoefficients solve_longitudinal(double l0, double l0_dot, double l0_ddot,
                                       double target_speed, double horizon,
                                       double terminal_accel = 0.0,
                                       double min_horizon = kSimulationStep);

// Quintic d(tau) from (d0, d0_dot, d0_ddot) to (d_T, 0, 0) at T.
QuinticCoefficients solve_lateral(double d0, double d0_dot, double d0_ddot, double lateral_target,
                                  double horizon, double min_horizon = kSimulationStep);

struct PlanSample {
  double tau = 0.0;
  double l = 0.0;
  double d = 0.0;
  double l_dot = 0.0;
  double d_dot = 0.0;
  double l_ddot = 0.0;
  double d_ddot = 0.0;
  double l_jerk = 0.0;
};

struct TrajectoryPlan {
  QuarticCoefficients longitudinal{};
  QuinticCoefficients lateral{};
  double horizon = 0.0;
  double dt = kSimulationStep;
  // Grid 0, dt, 2dt, ..., T. The last interval is shorter when T is not a
  // multiple of dt.
  std::vector<PlanSample> samples;

  // Samples after tau = 0; the tau = 0 sample alone for a degenerate plan.
  std::span<const PlanSample> planned_steps() const;
};

// Polynomial value and derivatives up to `order` at tau (Horner form).
double eval_poly(std::span<const double> coeffs, double tau, int derivative = 0);

TrajectoryPlan sample_plan(const QuarticCoefficients& longitudinal,
                           const QuinticCoefficients& lateral, double horizon,
                           double dt = kSimulationStep);

// Solves both directions from `initial` toward `action`. A horizon shorter
// than dt yields a single sample holding the initial state.
TrajectoryPlan make_plan(const FrenetState& initial, const PlanAction& action,
                         double dt = kSimulationStep);

// n * sum |l'''| over the planned steps, n being their count.
double longitudinal_jerk_sum(const TrajectoryPlan& plan);

}  // namespace ethrisk
