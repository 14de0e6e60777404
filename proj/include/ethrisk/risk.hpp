#pragma once

#include <limits>
#include <string>

#include "ethrisk/agent.hpp"
#include "ethrisk/collision.hpp"
#include "ethrisk/frenet.hpp"
#include "ethrisk/planner.hpp"
#include "ethrisk/prediction.hpp"

namespace ethrisk {

// Speed change of participant A in a collision with B, m/s.
double effective_collision_speed(double speed_a, double speed_b, double mass_a, double mass_b,
                                 double collision_angle);

enum class ImpactZone { kSide, kRear };

// Rear when the velocities are within 45 degrees of (anti-)parallel and the
// other agent lies ahead of or behind the ego along its heading; side
// otherwise. `bearing` is the direction to the other agent relative to the
// ego heading.
ImpactZone classify_impact(double collision_angle, double bearing);

// Logistic harm model coefficients.
struct HarmModel {
  double c0 = 4.457;
  double c1 = 0.177;
  double side = 0.244;
  double rear = -0.431;
};

double harm(double delta_v, ImpactZone zone, const HarmModel& model = {});

inline double timestep_risk(double probability, double harm_value) {
  return probability * harm_value;
}

struct RiskTuple {
  std::string other_id;
  double r_ego = 0.0;
  double r_obj = 0.0;
  double h_worst = 0.0;
  bool interacting = false;  // the overlap gate fired at some step
};

struct EgoBody {
  double half_length = 2.25;
  double half_width = 0.9;
  double mass = 1500.0;
  double center_offset = 0.0;  // footprint center ahead of the planned point, m
};

// Max-over-horizon risk of one ego plan against one other agent. Evaluated on
// the plan's planned steps; R_ego uses the ego's speed change, R_obj the
// other's, H_worst the larger harm of the pair over the gated steps.
RiskTuple trajectory_risk(const TrajectoryPlan& plan, const ReferencePath& path,
                          const EgoBody& ego, const AgentState& other,
                          const TrajectoryPredictor& predictor, const HarmModel& model = {},
                          CollisionStats* stats = nullptr);

inline constexpr double kTtcHorizon = 10.0;  // s; larger values read as infinite
inline constexpr double kInfiniteTtc = std::numeric_limits<double>::infinity();

// Constant-velocity time to collision along the line of centers, using
// bounding circles. Diverging, stationary-gap or > 10 s cases give infinity;
// already-touching circles closing in give 0.
double time_to_collision(const AgentState& ego, const AgentState& other);

}  // namespace ethrisk
