#include "ethrisk/observation.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace ethrisk {
namespace {

struct Ranked {
  double distance;
  const AgentState* agent;
};

void write_slot(Observation& obs, std::size_t offset, const std::array<double, 4>& slot) {
  std::copy(slot.begin(), slot.end(), obs.values.begin() + static_cast<std::ptrdiff_t>(offset));
}

}  // namespace

Observation build_observation(const ReferencePath& path, const EgoSnapshot& ego,
                              std::span<const AgentState> others,
                              std::span<const NavWaypoint> waypoints,
                              const ObservationConfig& config, ProjectionCache* cache) {
  const FrenetState fs = project_to_frenet(path, ego.pose, {}, cache);
  const PathSample road = path_heading_curvature(path, std::clamp(fs.l, 0.0, path.length()));
  const double half_width = 0.5 * config.road_width;

  Observation obs;
  obs.values[0] = (half_width - fs.d) / config.road_width;
  obs.values[1] = (half_width + fs.d) / config.road_width;
  obs.values[2] = ego.pose.speed / config.v_max;
  obs.values[3] = wrap_angle(ego.pose.heading - road.heading) / std::numbers::pi;
  obs.values[4] = ego.yaw_rate;

  // Next two waypoints ahead of the ego; the last one (or the path end) pads.
  std::vector<NavWaypoint> ahead;
  for (const NavWaypoint& wp : waypoints) {
    if (wp.l > fs.l) ahead.push_back(wp);
  }
  std::sort(ahead.begin(), ahead.end(),
            [](const NavWaypoint& a, const NavWaypoint& b) { return a.l < b.l; });
  if (ahead.empty()) ahead.push_back({path.length(), 0.0});
  for (std::size_t i = 0; i < Observation::kWaypoints; ++i) {
    const NavWaypoint& wp = ahead[std::min(i, ahead.size() - 1)];
    const double l = std::clamp(wp.l, 0.0, path.length());
    const PathSample lane = path_heading_curvature(path, l);
    write_slot(obs, Observation::kNavOffset + i * Observation::kSlotSize,
               {(wp.d - fs.d) / config.nav_distance_scale,
                (wp.l - fs.l) / config.nav_distance_scale, lane.curvature / config.curvature_norm,
                wrap_angle(lane.heading - road.heading) / config.heading_norm});
  }

  std::vector<Ranked> vehicles;
  std::vector<Ranked> vrus;
  for (const AgentState& a : others) {
    const double dist = (a.position - ego.pose.position).norm();
    if (dist > config.perception_range) continue;
    (is_vulnerable(a.cls) ? vrus : vehicles).push_back({dist, &a});
  }
  const auto by_distance = [](const Ranked& a, const Ranked& b) {
    if (a.distance != b.distance) return a.distance < b.distance;
    return a.agent->id < b.agent->id;
  };
  std::sort(vehicles.begin(), vehicles.end(), by_distance);
  std::sort(vrus.begin(), vrus.end(), by_distance);

  const Vec2 tangent = unit_from_angle(road.heading);
  const Vec2 normal{-tangent.y, tangent.x};
  const Vec2 ego_velocity = unit_from_angle(ego.pose.heading) * ego.pose.speed;
  const auto encode = [&](const AgentState& a) -> std::array<double, 4> {
    const Vec2 offset = a.position - ego.pose.position;
    const Vec2 rel_v = a.velocity() - ego_velocity;
    return {dot(offset, normal) / config.perception_range,
            dot(offset, tangent) / config.perception_range, dot(rel_v, normal) / config.v_max,
            dot(rel_v, tangent) / config.v_max};
  };

  for (std::size_t i = 0; i < Observation::kVehicles; ++i) {
    write_slot(obs, Observation::kVehicleOffset + i * Observation::kSlotSize,
               i < vehicles.size() ? encode(*vehicles[i].agent) : kPaddingSlot);
  }
  for (std::size_t i = 0; i < Observation::kVrus; ++i) {
    write_slot(obs, Observation::kVruOffset + i * Observation::kSlotSize,
               i < vrus.size() ? encode(*vrus[i].agent) : kPaddingSlot);
  }
  return obs;
}

}  // namespace ethrisk
