#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <vector>

#include "ethrisk/agent.hpp"
#include "ethrisk/frenet.hpp"

namespace ethrisk {

struct ObservationConfig {
  double road_width = 4.5;         // d_w, m
  double v_max = 22.22;            // m/s
  double nav_distance_scale = 50;  // m
  double curvature_norm = 60;
  double heading_norm = 60;
  double perception_range = 50;  // m; also the normalizer of agent offsets
};

// Ego block (5), two navigation waypoints (2 x 4), eight vehicles (8 x 4),
// four pedestrians/cyclists (4 x 4).
class Observation {
 public:
  static constexpr std::size_t kEgoSize = 5;
  static constexpr std::size_t kWaypoints = 2;
  static constexpr std::size_t kVehicles = 8;
  static constexpr std::size_t kVrus = 4;
  static constexpr std::size_t kSlotSize = 4;
  static constexpr std::size_t kNavOffset = kEgoSize;
  static constexpr std::size_t kVehicleOffset = kNavOffset + kWaypoints * kSlotSize;
  static constexpr std::size_t kVruOffset = kVehicleOffset + kVehicles * kSlotSize;
  static constexpr std::size_t kSize = kVruOffset + kVrus * kSlotSize;

  std::array<double, kSize> values{};

  std::span<const double> ego() const { return std::span(values).subspan(0, kEgoSize); }
  std::span<const double> navigation() const {
    return std::span(values).subspan(kNavOffset, kWaypoints * kSlotSize);
  }
  std::span<const double> vehicle(std::size_t i) const {
    return std::span(values).subspan(kVehicleOffset + i * kSlotSize, kSlotSize);
  }
  std::span<const double> vru(std::size_t i) const {
    return std::span(values).subspan(kVruOffset + i * kSlotSize, kSlotSize);
  }
};

static_assert(Observation::kSize == 61);

// Absent agent slot: "far away and co-moving".
inline constexpr std::array<double, 4> kPaddingSlot = {1.0, 1.0, 0.0, 0.0};

struct EgoSnapshot {
  CartesianPose pose;  // reference point
  double yaw_rate = 0.0;
};

// Navigation waypoint in path coordinates.
struct NavWaypoint {
  double l = 0.0;
  double d = 0.0;
};

// Agents are ranked by Euclidean distance (ties by id) and only those within
// the perception range are encoded. Agent offsets and relative velocities are
// expressed in the road frame at the ego's foot point.
Observation build_observation(const ReferencePath& path, const EgoSnapshot& ego,
                              std::span<const AgentState> others,
                              std::span<const NavWaypoint> waypoints,
                              const ObservationConfig& config = {},
                              ProjectionCache* cache = nullptr);

}  // namespace ethrisk
