#include "ethrisk/runner.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <random>

#include "ethrisk/collision.hpp"
#include "ethrisk/errors.hpp"
#include "ethrisk/ethics.hpp"
#include "ethrisk/observation.hpp"
#include "ethrisk/prediction.hpp"
#include "ethrisk/risk.hpp"
#include "json_fields.hpp"

namespace ethrisk {
namespace {

using detail::json;

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t step, std::uint64_t agent) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(step), static_cast<std::uint32_t>(agent)};
  std::array<std::uint32_t, 2> out{};
  seq.generate(out.begin(), out.end());
  return (static_cast<std::uint64_t>(out[0]) << 32) | out[1];
}

struct EgoGeometry {
  double half_length;
  double half_width;
  double mass;
  double center_offset;
};

AgentState ego_agent(const VehicleModel& vehicle, const EgoGeometry& geo) {
  AgentState s;
  s.id = "ego";
  s.position = vehicle.position + unit_from_angle(vehicle.heading) * geo.center_offset;
  s.heading = vehicle.heading;
  s.speed = vehicle.speed;
  s.mass = geo.mass;
  s.half_length = geo.half_length;
  s.half_width = geo.half_width;
  return s;
}

Observation observe(const Scenario& sc, const VehicleModel& vehicle, double accel,
                    std::span<const AgentState> others, const ObservationConfig& obs_cfg,
                    ProjectionCache& cache) {
  const EgoSnapshot snap{CartesianPose{vehicle.position, vehicle.heading, vehicle.speed, accel},
                         vehicle.yaw_rate};
  return build_observation(*sc.path, snap, others, sc.navigation, obs_cfg, &cache);
}

// Successive plans stay consistent by starting from the previous plan's
// kinematics one step in, at the measured position. The measured state takes
// over again once it drifts this far from the plan.
constexpr double kResyncSpeed = 3.0;    // m/s
constexpr double kResyncLateral = 1.0;  // m/s

FrenetState continue_plan(FrenetState measured, const std::optional<PlanSample>& previous) {
  if (!previous) return measured;
  if (std::abs(previous->l_dot - measured.l_dot) > kResyncSpeed ||
      std::abs(previous->d_dot - measured.d_dot) > kResyncLateral) {
    return measured;
  }
  measured.l_dot = previous->l_dot;
  measured.l_ddot = previous->l_ddot;
  measured.d_dot = previous->d_dot;
  measured.d_ddot = previous->d_ddot;
  return measured;
}

double safe_ethical(const RiskSet& set, const CostConfig& cfg) {
  return set.risks.empty() ? 0.0 : ethical_cost(set, cfg);
}

}  // namespace

std::unique_ptr<Policy> make_policy(const std::string& name, const Scenario& scenario,
                                    std::uint64_t seed, const RunConfig& config) {
  if (name == "lane_keep") {
    return std::make_unique<LaneKeepPolicy>(config.desired_speed.value_or(0.9 * scenario.v_max),
                                            scenario.lane_offset);
  }
  if (name == "random") {
    return std::make_unique<RandomBoundedPolicy>(
        seed, ActionBounds{2.0, 0.5 * scenario.road_width, scenario.v_max});
  }
  const auto it = scenario.policies.find(name);
  if (it == scenario.policies.end()) {
    throw ValidationError("unknown policy '" + name + "' for scenario " + scenario.name);
  }
  return std::make_unique<ScriptedPolicy>(name, it->second);
}

EpisodeLog run_episode(const Scenario& sc, const Policy& policy, const RunConfig& config,
                       std::uint64_t seed, ReplayBuffer* replay) {
  const ReferencePath& path = *sc.path;
  const double dt = kSimulationStep;
  const int total_steps = static_cast<int>(std::ceil(sc.duration / dt - 1e-9));
  const ActionBounds bounds{2.0, 0.5 * sc.road_width, sc.v_max};
  const bool feedback = config.mode != RunMode::kStandard;

  CostConfig ethical_cfg = config.cost;
  ethical_cfg.mode = CostMode::kEthical;
  CostConfig selfish_cfg = config.cost;
  selfish_cfg.mode = CostMode::kSelfish;

  RewardConfig reward_cfg = config.reward;
  reward_cfg.desired_speed = config.desired_speed.value_or(0.9 * sc.v_max);

  ObservationConfig obs_cfg;
  obs_cfg.road_width = sc.road_width;
  obs_cfg.v_max = sc.v_max;

  const EgoGeometry geo{sc.ego.half_length, sc.ego.half_width, sc.ego.mass, 0.5 * sc.ego.wheelbase};
  const EgoBody body{geo.half_length, geo.half_width, geo.mass, geo.center_offset};
  const ConstantVelocityPredictor vehicle_predictor(config.prediction);

  VehicleModel vehicle;
  vehicle.wheelbase = sc.ego.wheelbase;
  vehicle.position = sc.ego.position;
  vehicle.heading = sc.ego.heading;
  vehicle.speed = sc.ego.speed;
  vehicle.max_speed = sc.v_max;

  EpisodeLog log;
  log.scenario = sc.name;
  log.policy = policy.name();
  log.mode = config.mode;
  log.seed = seed;
  log.lagrange_before = config.lagrange;
  log.lagrange_after = config.lagrange;

  PolicyState policy_state;
  PidState pid;
  ProjectionCache ego_cache;
  ProjectionCache obs_cache;
  double accel = 0.0;
  std::vector<AgentState> others = sc.agents_at(0.0);
  Observation obs = observe(sc, vehicle, accel, others, obs_cfg, obs_cache);
  std::vector<double> step_costs;
  std::optional<PlanSample> carry;

  for (int k = 0; k < total_steps && log.terminal == TerminalEvent::kNone; ++k) {
    StepRecord rec;
    rec.step = k;
    rec.time = k * dt;
    try {
      auto [action, next_state] = policy.act(obs, policy_state);
      policy_state = std::move(next_state);
      action = clamp_action(action, bounds);
      rec.action = action;

      const CartesianPose pose{vehicle.position, vehicle.heading, vehicle.speed, accel};
      const FrenetState start = continue_plan(
          project_to_frenet(path, pose, config.tracker.projection, &ego_cache), carry);
      const TrajectoryPlan plan = make_plan(start, action, dt);
      carry = plan.samples.size() > 1 ? plan.samples[1] : plan.samples.front();

      // Pairwise risk against every agent's predicted future.
      std::vector<RiskTuple> tuples;
      std::vector<AgentClass> classes;
      const AgentState ego_now = ego_agent(vehicle, geo);
      for (std::size_t i = 0; i < sc.agents.size(); ++i) {
        const AgentSpec& spec = sc.agents[i];
        RiskTuple tuple;
        if (is_vulnerable(spec.cls)) {
          const NoisyReplayPredictor vru_predictor(
              [&spec, &path](double t) { return spec.state_at(path, t); }, rec.time,
              spec.prediction_noise, derive_seed(seed, static_cast<std::uint64_t>(k), i));
          tuple = trajectory_risk(plan, path, body, others[i], vru_predictor, config.harm);
        } else {
          tuple = trajectory_risk(plan, path, body, others[i], vehicle_predictor, config.harm);
        }
        tuples.push_back(tuple);
        classes.push_back(spec.cls);
        rec.ego_risk = std::max(rec.ego_risk, tuple.r_ego);
        rec.max_other_risk = std::max(rec.max_other_risk, tuple.r_obj);
        const double ttc = time_to_collision(ego_now, others[i]);
        rec.ttc.push_back({spec.id, ttc});
        rec.min_ttc = std::min(rec.min_ttc, ttc);
      }
      rec.agent_count = static_cast<int>(sc.agents.size());
      rec.ethical_cost = safe_ethical(compose_risk_set(tuples, classes, ethical_cfg), ethical_cfg);
      rec.selfish_cost = selfish_cost(ego_risks(tuples), selfish_cfg);
      switch (config.mode) {
        case RunMode::kEthical:
          rec.cost = rec.ethical_cost;
          break;
        case RunMode::kSelfish:
          rec.cost = rec.selfish_cost;
          break;
        case RunMode::kStandard:
          rec.cost = 0.0;
          break;
      }

      // Track the plan for one step, then move the world on.
      const double speed_before = vehicle.speed;
      const std::vector<ControlRecord> trace =
          track_plan(vehicle, plan, path, config.tracker, pid, 1, dt);
      const double new_accel = (vehicle.speed - speed_before) / dt;
      rec.jerk = k == 0 ? 0.0 : (new_accel - accel) / dt;
      rec.accel = new_accel;
      accel = new_accel;
      rec.steer = trace.empty() ? 0.0 : trace.front().steer;
      rec.x = vehicle.position.x;
      rec.y = vehicle.position.y;
      rec.heading = vehicle.heading;
      rec.speed = vehicle.speed;
      rec.yaw_rate = vehicle.yaw_rate;

      const double next_time = (k + 1) * dt;
      others = sc.agents_at(next_time);
      const AgentState ego_next = ego_agent(vehicle, geo);
      const FrenetState center = project_to_frenet(
          path, CartesianPose{ego_next.position, ego_next.heading, ego_next.speed, 0.0},
          config.tracker.projection);
      rec.l = center.l;
      rec.d = center.d;

      // Terminal checks in priority order.
      bool hit_vehicle = false;
      bool hit_vru = false;
      const OrientedBox ego_box = ego_next.box();
      for (const AgentState& o : others) {
        if (sat_overlap(ego_box, o.box())) (is_vulnerable(o.cls) ? hit_vru : hit_vehicle) = true;
      }
      if (hit_vru) {
        log.terminal = TerminalEvent::kCollisionVru;
      } else if (hit_vehicle) {
        log.terminal = TerminalEvent::kCollisionVehicle;
      } else if (std::abs(center.d) > 0.5 * sc.road_width + config.off_road_margin) {
        log.terminal = TerminalEvent::kOutOfRoad;
      } else if (center.l >= sc.destination_from && center.l <= sc.destination_to) {
        log.terminal = TerminalEvent::kSuccess;
      } else if (k + 1 >= total_steps) {
        log.terminal = TerminalEvent::kTimeout;
      }

      const FrenetState after = project_to_frenet(
          path, CartesianPose{vehicle.position, vehicle.heading, vehicle.speed, accel},
          config.tracker.projection, &ego_cache);
      const double delta_l = after.l - start.l;
      rec.reward = step_reward(plan, std::abs(delta_l), delta_l >= 0.0 ? 1 : -1, log.terminal,
                               reward_cfg);

      const Observation next_obs = observe(sc, vehicle, accel, others, obs_cfg, obs_cache);
      if (replay != nullptr) {
        const auto a = normalize_action(action, bounds);
        replay->add(Transition{std::vector<double>(obs.values.begin(), obs.values.end()), a,
                               rec.reward.total, rec.cost,
                               std::vector<double>(next_obs.values.begin(), next_obs.values.end()),
                               log.terminal != TerminalEvent::kNone});
      }
      obs = next_obs;
    } catch (const StepError&) {
      throw;
    } catch (const Error& e) {
      throw StepError(k, e.what());
    } catch (const std::invalid_argument& e) {
      throw StepError(k, e.what());
    }
    log.episode_return += rec.reward.total;
    step_costs.push_back(rec.cost);
    log.records.push_back(std::move(rec));
  }
  if (log.terminal == TerminalEvent::kNone) log.terminal = TerminalEvent::kTimeout;

  log.episode_cost = aggregate_episode_cost(step_costs, config.aggregation, config.discount);
  if (feedback) log.lagrange_after = lagrange_update(config.lagrange, log.episode_cost);
  return log;
}

namespace {

json ttc_value(double ttc) { return std::isinf(ttc) ? json(nullptr) : json(ttc); }

double ttc_from(const json& v) { return v.is_null() ? kInfiniteTtc : v.get<double>(); }

TerminalEvent terminal_from_string(const std::string& name) {
  for (TerminalEvent e : {TerminalEvent::kNone, TerminalEvent::kSuccess, TerminalEvent::kOutOfRoad,
                          TerminalEvent::kCollisionVehicle, TerminalEvent::kCollisionVru,
                          TerminalEvent::kTimeout}) {
    if (to_string(e) == name) return e;
  }
  throw ValidationError("log: unknown terminal event '" + name + "'");
}

json lagrange_json(const LagrangeState& s) {
  return {{"lambda", s.lambda}, {"learning_rate", s.learning_rate}, {"cost_limit", s.cost_limit}};
}

LagrangeState lagrange_from(const json& j) {
  return {j.at("lambda").get<double>(), j.at("learning_rate").get<double>(),
          j.at("cost_limit").get<double>()};
}

}  // namespace

std::string log_to_json(const EpisodeLog& log) {
  json records = json::array();
  for (const StepRecord& r : log.records) {
    json ttc = json::array();
    for (const AgentTtc& t : r.ttc) ttc.push_back({{"id", t.id}, {"ttc_s", ttc_value(t.ttc)}});
    records.push_back({
        {"step", r.step},
        {"time_s", r.time},
        {"x_m", r.x},
        {"y_m", r.y},
        {"heading_rad", r.heading},
        {"speed_mps", r.speed},
        {"accel_mps2", r.accel},
        {"jerk_mps3", r.jerk},
        {"yaw_rate_radps", r.yaw_rate},
        {"steer_rad", r.steer},
        {"l_m", r.l},
        {"d_m", r.d},
        {"action", {r.action.horizon, r.action.lateral_target, r.action.target_speed}},
        {"agent_count", r.agent_count},
        {"ttc", ttc},
        {"min_ttc_s", ttc_value(r.min_ttc)},
        {"ego_risk", r.ego_risk},
        {"max_other_risk", r.max_other_risk},
        {"ethical_cost", r.ethical_cost},
        {"selfish_cost", r.selfish_cost},
        {"cost", r.cost},
        {"reward",
         {{"speed", r.reward.speed},
          {"progress", r.reward.progress},
          {"jerk", r.reward.jerk},
          {"terminal", r.reward.terminal},
          {"total", r.reward.total}}},
    });
  }
  const json doc = {
      {"scenario", log.scenario},
      {"policy", log.policy},
      {"mode", std::string(to_string(log.mode))},
      {"seed", log.seed},
      {"terminal", std::string(to_string(log.terminal))},
      {"episode_return", log.episode_return},
      {"episode_cost", log.episode_cost},
      {"lagrange_before", lagrange_json(log.lagrange_before)},
      {"lagrange_after", lagrange_json(log.lagrange_after)},
      {"records", records},
  };
  return doc.dump(1) + "\n";
}

EpisodeLog log_from_json(std::string_view text, const std::string& source) {
  const json doc = detail::parse_json(text, source);
  try {
    EpisodeLog log;
    log.scenario = doc.at("scenario").get<std::string>();
    log.policy = doc.at("policy").get<std::string>();
    log.mode = run_mode_from_string(doc.at("mode").get<std::string>());
    log.seed = doc.at("seed").get<std::uint64_t>();
    log.terminal = terminal_from_string(doc.at("terminal").get<std::string>());
    log.episode_return = doc.at("episode_return").get<double>();
    log.episode_cost = doc.at("episode_cost").get<double>();
    log.lagrange_before = lagrange_from(doc.at("lagrange_before"));
    log.lagrange_after = lagrange_from(doc.at("lagrange_after"));
    for (const json& j : doc.at("records")) {
      StepRecord r;
      r.step = j.at("step").get<int>();
      r.time = j.at("time_s").get<double>();
      r.x = j.at("x_m").get<double>();
      r.y = j.at("y_m").get<double>();
      r.heading = j.at("heading_rad").get<double>();
      r.speed = j.at("speed_mps").get<double>();
      r.accel = j.at("accel_mps2").get<double>();
      r.jerk = j.at("jerk_mps3").get<double>();
      r.yaw_rate = j.at("yaw_rate_radps").get<double>();
      r.steer = j.at("steer_rad").get<double>();
      r.l = j.at("l_m").get<double>();
      r.d = j.at("d_m").get<double>();
      const json& a = j.at("action");
      r.action = {a.at(0).get<double>(), a.at(1).get<double>(), a.at(2).get<double>()};
      r.agent_count = j.at("agent_count").get<int>();
      for (const json& t : j.at("ttc")) {
        r.ttc.push_back({t.at("id").get<std::string>(), ttc_from(t.at("ttc_s"))});
      }
      r.min_ttc = ttc_from(j.at("min_ttc_s"));
      r.ego_risk = j.at("ego_risk").get<double>();
      r.max_other_risk = j.at("max_other_risk").get<double>();
      r.ethical_cost = j.at("ethical_cost").get<double>();
      r.selfish_cost = j.at("selfish_cost").get<double>();
      r.cost = j.at("cost").get<double>();
      const json& w = j.at("reward");
      r.reward = {w.at("speed").get<double>(), w.at("progress").get<double>(),
                  w.at("jerk").get<double>(), w.at("terminal").get<double>(),
                  w.at("total").get<double>()};
      log.records.push_back(std::move(r));
    }
    return log;
  } catch (const json::exception& e) {
    throw ValidationError(source + ": malformed episode log (" + e.what() + ")");
  }
}

}  // namespace ethrisk
