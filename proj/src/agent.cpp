#include "ethrisk/agent.hpp"

#include <cmath>
#include <stdexcept>

namespace ethrisk {

std::string_view to_string(AgentClass cls) {
  switch (cls) {
    case AgentClass::kVehicle:
      return "vehicle";
    case AgentClass::kCyclist:
      return "cyclist";
    case AgentClass::kPedestrian:
      return "pedestrian";
  }
  return "vehicle";
}

AgentClass agent_class_from_string(std::string_view name) {
  if (name == "vehicle") return AgentClass::kVehicle;
  if (name == "cyclist") return AgentClass::kCyclist;
  if (name == "pedestrian") return AgentClass::kPedestrian;
  throw std::invalid_argument("unknown agent class '" + std::string(name) + "'");
}

double default_mass(AgentClass cls) {
  switch (cls) {
    case AgentClass::kVehicle:
      return 1500.0;
    case AgentClass::kCyclist:
      return 90.0;
    case AgentClass::kPedestrian:
      return 75.0;
  }
  return 1500.0;
}

double AgentState::bounding_radius() const { return std::hypot(half_length, half_width); }

}  // namespace ethrisk
