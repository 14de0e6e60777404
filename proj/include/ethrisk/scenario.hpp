#pragma once

#include <filesystem>
#include <map>
#include <memory>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "ethrisk/agent.hpp"
#include "ethrisk/frenet.hpp"
#include "ethrisk/observation.hpp"
#include "ethrisk/planner.hpp"

namespace ethrisk {

// Straight-line motion from a Cartesian start pose.
struct ConstantVelocityTrack {
  Vec2 start;
  double heading = 0.0;
  double speed = 0.0;
};

// Constant speed along the reference path at a fixed lateral offset.
struct FrenetTrack {
  double l0 = 0.0;
  double d = 0.0;
  double speed = 0.0;
};

// Timed positions, linearly interpolated. Heading follows the segment
// direction, speed the segment length over its duration.
struct WaypointTrack {
  std::vector<double> times;
  std::vector<Vec2> points;
};

using TrackSpec = std::variant<ConstantVelocityTrack, FrenetTrack, WaypointTrack>;

// A scripted, open-loop traffic participant.
//
// After the last waypoint the agent holds its final position with zero speed
// and its last heading. Constant-velocity tracks never end.
struct AgentSpec {
  std::string id;
  AgentClass cls = AgentClass::kVehicle;
  double mass = 1500.0;
  double half_length = 2.25;
  double half_width = 0.9;
  double prediction_noise = 0.2;  // m, used for pedestrians and cyclists
  TrackSpec track;

  AgentState state_at(const ReferencePath& path, double time) const;
};

struct EgoSpec {
  Vec2 position;  // rear axle
  double heading = 0.0;
  double speed = 0.0;
  double mass = 1500.0;
  double half_length = 2.25;
  double half_width = 0.9;
  double wheelbase = 2.8;
};

struct Scenario {
  std::string name;
  std::string description;
  double duration = 10.0;  // s
  double road_width = 4.5;
  double v_max = 22.22;
  double lane_offset = 0.0;  // lateral target of the lane-keep policy
  std::shared_ptr<const ReferencePath> path;
  EgoSpec ego;
  double destination_from = 0.0;  // arclength window, m
  double destination_to = 0.0;
  std::vector<NavWaypoint> navigation;
  std::vector<AgentSpec> agents;
  std::map<std::string, std::vector<PlanAction>> policies;

  std::vector<AgentState> agents_at(double time) const;
};

// Parses and validates a scenario document. `source` labels error messages.
Scenario parse_scenario(std::string_view text, const std::string& source = "<scenario>");
Scenario load_scenario(const std::filesystem::path& file);

}  // namespace ethrisk
