#include "ethrisk/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "ethrisk/errors.hpp"
#include "json_fields.hpp"

namespace ethrisk {
namespace {

using detail::fail;
using detail::FieldReader;
using detail::json;

std::string indexed(const std::string& path, std::size_t i) {
  return path + "[" + std::to_string(i) + "]";
}

double waypoint_heading(const WaypointTrack& track, std::size_t segment) {
  // Nearest segment with nonzero length, searching backwards first.
  for (std::size_t k = segment + 1; k-- > 0;) {
    const Vec2 step = track.points[k + 1] - track.points[k];
    if (step.norm() > 0.0) return std::atan2(step.y, step.x);
  }
  for (std::size_t k = segment + 1; k + 1 < track.points.size(); ++k) {
    const Vec2 step = track.points[k + 1] - track.points[k];
    if (step.norm() > 0.0) return std::atan2(step.y, step.x);
  }
  return 0.0;
}

struct ClassDefaults {
  double length;
  double width;
};

ClassDefaults class_defaults(AgentClass cls) {
  switch (cls) {
    case AgentClass::kVehicle:
      return {4.5, 1.8};
    case AgentClass::kCyclist:
      return {1.8, 0.6};
    case AgentClass::kPedestrian:
      return {0.5, 0.5};
  }
  return {4.5, 1.8};
}

std::vector<Vec2> read_polyline(const json& node, const std::string& path) {
  if (!node.is_array()) fail(path, "must be an array of [x, y] pairs");
  std::vector<Vec2> points;
  for (std::size_t i = 0; i < node.size(); ++i) {
    const json& p = node[i];
    if (!p.is_array() || p.size() != 2 || !p[0].is_number() || !p[1].is_number()) {
      fail(indexed(path, i), "must be an [x, y] pair of numbers");
    }
    const Vec2 v{p[0].get<double>(), p[1].get<double>()};
    if (!std::isfinite(v.x) || !std::isfinite(v.y)) fail(indexed(path, i), "must be finite");
    points.push_back(v);
  }
  return points;
}

TrackSpec read_track(const json& node, const std::string& path) {
  FieldReader r(node, path);
  const std::string type = r.string("type");
  TrackSpec spec;
  if (type == "constant_velocity") {
    ConstantVelocityTrack t;
    t.start = {r.number("x_m"), r.number("y_m")};
    t.heading = r.number("heading_rad");
    t.speed = r.non_negative("speed_mps");
    spec = t;
  } else if (type == "frenet_constant_velocity") {
    FrenetTrack t;
    t.l0 = r.number("l_m");
    t.d = r.number("d_m", 0.0);
    t.speed = r.non_negative("speed_mps");
    spec = t;
  } else if (type == "waypoints") {
    WaypointTrack t;
    const json& points = r.child("points");
    const std::string points_path = r.field("points");
    if (!points.is_array() || points.empty()) fail(points_path, "must be a non-empty array");
    for (std::size_t i = 0; i < points.size(); ++i) {
      FieldReader p(points[i], indexed(points_path, i));
      const double time = p.non_negative("t_s");
      if (!t.times.empty() && !(time > t.times.back())) {
        fail(p.field("t_s"), "times must be strictly increasing");
      }
      t.times.push_back(time);
      t.points.push_back({p.number("x_m"), p.number("y_m")});
      p.finish();
    }
    if (t.times.front() != 0.0) fail(indexed(points_path, 0) + ".t_s", "trajectory must start at 0");
    spec = t;
  } else {
    fail(r.field("type"),
         "must be one of constant_velocity, frenet_constant_velocity, waypoints");
  }
  r.finish();
  return spec;
}

AgentSpec read_agent(const json& node, const std::string& path) {
  FieldReader r(node, path);
  AgentSpec a;
  a.id = r.string("id");
  if (a.id.empty()) fail(r.field("id"), "must not be empty");
  try {
    a.cls = agent_class_from_string(r.string("class"));
  } catch (const std::invalid_argument&) {
    fail(r.field("class"), "must be vehicle, cyclist or pedestrian");
  }
  const ClassDefaults dims = class_defaults(a.cls);
  a.mass = r.positive("mass_kg", default_mass(a.cls));
  a.half_length = 0.5 * r.positive("length_m", dims.length);
  a.half_width = 0.5 * r.positive("width_m", dims.width);
  a.prediction_noise = r.positive("prediction_noise_m", 0.2);
  a.track = read_track(r.child("trajectory"), r.field("trajectory"));
  r.finish();
  return a;
}

EgoSpec read_ego(const json& node, const std::string& path, const ReferencePath& ref) {
  FieldReader r(node, path);
  EgoSpec e;
  e.speed = r.non_negative("speed_mps");
  e.mass = r.positive("mass_kg", 1500.0);
  e.half_length = 0.5 * r.positive("length_m", 4.5);
  e.half_width = 0.5 * r.positive("width_m", 1.8);
  e.wheelbase = r.positive("wheelbase_m", 2.8);
  const bool cartesian = r.has("x_m") || r.has("y_m") || r.has("heading_rad");
  const bool frenet = r.has("l_m") || r.has("d_m");
  if (cartesian == frenet) fail(path, "give either x_m/y_m/heading_rad or l_m/d_m");
  if (cartesian) {
    e.position = {r.number("x_m"), r.number("y_m")};
    e.heading = r.number("heading_rad");
  } else {
    const double l = r.number("l_m");
    const double d = r.number("d_m", 0.0);
    if (l < 0.0 || l > ref.length()) fail(r.field("l_m"), "must lie on the reference path");
    const CartesianPose pose = frenet_to_cartesian(ref, FrenetState{l, d, 1.0, 0.0, 0.0, 0.0});
    e.position = pose.position;
    e.heading = pose.heading;
  }
  r.finish();
  return e;
}

PlanAction read_action(const json& node, const std::string& path, const ActionBounds& bounds) {
  if (!node.is_array() || node.size() != 3 ||
      !std::all_of(node.begin(), node.end(), [](const json& v) { return v.is_number(); })) {
    fail(path, "must be [horizon_s, lateral_target_m, target_speed_mps]");
  }
  const PlanAction a{node[0].get<double>(), node[1].get<double>(), node[2].get<double>()};
  if (!(a.horizon >= 0.0 && a.horizon <= bounds.max_horizon)) fail(path, "horizon outside [0, 2] s");
  if (!(a.lateral_target >= 0.0 && a.lateral_target <= bounds.max_lateral)) {
    fail(path, "lateral target outside [0, road_width_m / 2]");
  }
  if (!(a.target_speed >= 0.0 && a.target_speed <= bounds.max_speed)) {
    fail(path, "target speed outside [0, v_max_mps]");
  }
  return a;
}

}  // namespace

AgentState AgentSpec::state_at(const ReferencePath& path, double time) const {
  AgentState s;
  s.id = id;
  s.cls = cls;
  s.mass = mass;
  s.half_length = half_length;
  s.half_width = half_width;

  if (const auto* cv = std::get_if<ConstantVelocityTrack>(&track)) {
    s.position = cv->start + unit_from_angle(cv->heading) * (cv->speed * time);
    s.heading = cv->heading;
    s.speed = cv->speed;
  } else if (const auto* ft = std::get_if<FrenetTrack>(&track)) {
    const CartesianPose pose = frenet_to_cartesian_extended(
        path, FrenetState{ft->l0 + ft->speed * time, ft->d, ft->speed, 0.0, 0.0, 0.0});
    s.position = pose.position;
    s.heading = pose.heading;
    s.speed = pose.speed;
  } else {
    const auto& wt = std::get<WaypointTrack>(track);
    const std::size_t n = wt.times.size();
    if (n == 1 || time >= wt.times.back()) {
      s.position = wt.points.back();
      s.heading = n == 1 ? 0.0 : waypoint_heading(wt, n - 2);
      s.speed = 0.0;
      return s;
    }
    const auto upper = std::upper_bound(wt.times.begin(), wt.times.end(), time);
    const std::size_t i = upper == wt.times.begin()
                              ? 0
                              : static_cast<std::size_t>(upper - wt.times.begin()) - 1;
    const double span = wt.times[i + 1] - wt.times[i];
    const double t = std::clamp((time - wt.times[i]) / span, 0.0, 1.0);
    const Vec2 step = wt.points[i + 1] - wt.points[i];
    s.position = wt.points[i] + step * t;
    s.heading = waypoint_heading(wt, i);
    s.speed = step.norm() / span;
  }
  return s;
}

std::vector<AgentState> Scenario::agents_at(double time) const {
  std::vector<AgentState> out;
  out.reserve(agents.size());
  for (const AgentSpec& a : agents) out.push_back(a.state_at(*path, time));
  return out;
}

Scenario parse_scenario(std::string_view text, const std::string& source) {
  const json doc = detail::parse_json(text, source);
  FieldReader r(doc, "scenario");
  Scenario sc;
  sc.name = r.string("name");
  sc.description = r.string("description", "");
  sc.duration = r.positive("duration_s");
  const double dt = r.positive("dt_s", kSimulationStep);
  if (std::abs(dt - kSimulationStep) > 1e-12) fail(r.field("dt_s"), "only 0.1 s is supported");
  sc.road_width = r.positive("road_width_m", 4.5);
  sc.v_max = r.positive("v_max_mps", 22.22);
  sc.lane_offset = r.number("lane_offset_m", 0.0);
  if (sc.lane_offset < 0.0 || sc.lane_offset > 0.5 * sc.road_width) {
    fail(r.field("lane_offset_m"), "must lie in [0, road_width_m / 2]");
  }

  const std::vector<Vec2> polyline = read_polyline(r.child("reference_path"), r.field("reference_path"));
  try {
    sc.path = std::make_shared<const ReferencePath>(polyline);
  } catch (const Error& e) {
    fail(r.field("reference_path"), e.what());
  }
  const ReferencePath& ref = *sc.path;

  sc.ego = read_ego(r.child("ego"), r.field("ego"), ref);
  try {
    project_to_frenet(ref, CartesianPose{sc.ego.position, sc.ego.heading, sc.ego.speed, 0.0});
  } catch (const PoseOffCorridor&) {
    fail(r.field("ego"), "initial pose is outside the path corridor");
  }

  {
    FieldReader dest(r.child("destination"), r.field("destination"));
    sc.destination_from = dest.number("from_l_m");
    sc.destination_to = dest.number("to_l_m");
    if (!(sc.destination_from >= 0.0 && sc.destination_to <= ref.length() &&
          sc.destination_from < sc.destination_to)) {
      fail(dest.path(), "must be a non-empty arclength window on the reference path");
    }
    dest.finish();
  }

  if (const json* nav = r.optional_child("navigation_waypoints")) {
    const std::string nav_path = r.field("navigation_waypoints");
    if (!nav->is_array()) fail(nav_path, "must be an array");
    for (std::size_t i = 0; i < nav->size(); ++i) {
      FieldReader w((*nav)[i], indexed(nav_path, i));
      NavWaypoint wp{w.number("l_m"), w.number("d_m", 0.0)};
      if (wp.l < 0.0 || wp.l > ref.length()) fail(w.field("l_m"), "must lie on the reference path");
      w.finish();
      sc.navigation.push_back(wp);
    }
  }

  if (const json* agents = r.optional_child("agents")) {
    const std::string agents_path = r.field("agents");
    if (!agents->is_array()) fail(agents_path, "must be an array");
    std::set<std::string> ids;
    for (std::size_t i = 0; i < agents->size(); ++i) {
      AgentSpec a = read_agent((*agents)[i], indexed(agents_path, i));
      if (!ids.insert(a.id).second) fail(indexed(agents_path, i) + ".id", "duplicate agent id");
      sc.agents.push_back(std::move(a));
    }
  }

  if (const json* policies = r.optional_child("policies")) {
    const std::string policies_path = r.field("policies");
    if (!policies->is_object()) fail(policies_path, "must map names to action lists");
    const ActionBounds bounds{2.0, 0.5 * sc.road_width, sc.v_max};
    for (const auto& [name, actions] : policies->items()) {
      const std::string path = policies_path + "." + name;
      if (name == "lane_keep" || name == "random") fail(path, "name is reserved");
      if (!actions.is_array() || actions.empty()) fail(path, "must be a non-empty list of actions");
      std::vector<PlanAction> list;
      for (std::size_t i = 0; i < actions.size(); ++i) {
        list.push_back(read_action(actions[i], indexed(path, i), bounds));
      }
      sc.policies.emplace(name, std::move(list));
    }
  }

  r.finish();
  return sc;
}

Scenario load_scenario(const std::filesystem::path& file) {
  std::ifstream in(file, std::ios::binary);
  if (!in) throw IoError("cannot open scenario file " + file.string());
  std::ostringstream text;
  text << in.rdbuf();
  return parse_scenario(text.str(), file.string());
}

}  // namespace ethrisk
