#pragma once

#include <string>
#include <string_view>

#include "ethrisk/collision.hpp"
#include "ethrisk/math.hpp"

namespace ethrisk {

enum class AgentClass { kVehicle, kCyclist, kPedestrian };

std::string_view to_string(AgentClass cls);
AgentClass agent_class_from_string(std::string_view name);  // throws std::invalid_argument

inline bool is_vulnerable(AgentClass cls) { return cls != AgentClass::kVehicle; }

// Mass used when a scenario does not override it, kg.
double default_mass(AgentClass cls);

// Snapshot of one traffic participant. Position is the footprint center.
struct AgentState {
  std::string id;
  AgentClass cls = AgentClass::kVehicle;
  Vec2 position;
  double heading = 0.0;
  double speed = 0.0;
  double mass = 1500.0;
  double half_length = 2.25;
  double half_width = 0.9;

  Vec2 velocity() const { return unit_from_angle(heading) * speed; }
  OrientedBox box() const { return OrientedBox(position, heading, half_length, half_width); }
  double bounding_radius() const;
};

}  // namespace ethrisk
