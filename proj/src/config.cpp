#include "ethrisk/config.hpp"

#include <fstream>
#include <sstream>

#include "ethrisk/errors.hpp"
#include "json_fields.hpp"

namespace ethrisk {
namespace {

using detail::fail;
using detail::FieldReader;
using detail::json;

void read_cost(FieldReader& r, CostConfig& c) {
  c.w_bayes = r.non_negative("w_bayes", c.w_bayes);
  c.w_equality = r.non_negative("w_equality", c.w_equality);
  c.w_maximin = r.non_negative("w_maximin", c.w_maximin);
  c.w_selfish = r.non_negative("w_selfish", c.w_selfish);
  c.gamma_maximin = r.number("gamma_maximin", c.gamma_maximin);
  if (c.gamma_maximin < 1.0) fail(r.field("gamma_maximin"), "must be at least 1");
  c.cyclist_multiplier = r.non_negative("cyclist_multiplier", c.cyclist_multiplier);
  c.pedestrian_multiplier = r.non_negative("pedestrian_multiplier", c.pedestrian_multiplier);
}

void read_reward(FieldReader& r, RunConfig& cfg) {
  RewardConfig& w = cfg.reward;
  w.w_speed = r.number("w_speed", w.w_speed);
  w.w_progress = r.number("w_progress", w.w_progress);
  w.w_jerk = r.number("w_jerk", w.w_jerk);
  if (r.has("desired_speed_mps")) cfg.desired_speed = r.positive("desired_speed_mps");
  w.success = r.number("success", w.success);
  w.out_of_road = r.number("out_of_road", w.out_of_road);
  w.collision_vehicle = r.number("collision_vehicle", w.collision_vehicle);
  w.collision_vru = r.number("collision_vru", w.collision_vru);
}

void read_controller(FieldReader& r, TrackerConfig& t) {
  t.pid.kp = r.non_negative("kp", t.pid.kp);
  t.pid.ki = r.non_negative("ki", t.pid.ki);
  t.pid.kd = r.non_negative("kd", t.pid.kd);
  t.pid.integral_clamp = r.positive("integral_clamp", t.pid.integral_clamp);
  t.pid.output_clamp = r.positive("accel_limit_mps2", t.pid.output_clamp);
  t.stanley.k_v = r.positive("k_v", t.stanley.k_v);
  t.stanley.steering_limit = r.positive("steering_limit_rad", t.stanley.steering_limit);
  t.stanley.speed_floor = r.positive("speed_floor_mps", t.stanley.speed_floor);
}

template <typename Fn>
void section(FieldReader& parent, const std::string& key, Fn&& fn) {
  if (const json* node = parent.optional_child(key)) {
    FieldReader r(*node, parent.field(key));
    fn(r);
    r.finish();
  }
}

}  // namespace

std::string_view to_string(RunMode mode) {
  switch (mode) {
    case RunMode::kEthical:
      return "ethical";
    case RunMode::kSelfish:
      return "selfish";
    case RunMode::kStandard:
      return "standard";
  }
  return "ethical";
}

RunMode run_mode_from_string(std::string_view name) {
  if (name == "ethical") return RunMode::kEthical;
  if (name == "selfish") return RunMode::kSelfish;
  if (name == "standard") return RunMode::kStandard;
  throw ValidationError("mode must be ethical, selfish or standard, got '" + std::string(name) + "'");
}

CostConfig RunConfig::effective_cost() const {
  CostConfig c = cost;
  c.mode = mode == RunMode::kSelfish ? CostMode::kSelfish : CostMode::kEthical;
  return c;
}

RunConfig parse_run_config(std::string_view text, const std::string& source) {
  const json doc = detail::parse_json(text, source);
  FieldReader r(doc, "config");
  RunConfig cfg;
  if (r.has("mode")) {
    const std::string mode = r.string("mode");
    try {
      cfg.mode = run_mode_from_string(mode);
    } catch (const ValidationError&) {
      fail(r.field("mode"), "must be ethical, selfish or standard");
    }
  }
  section(r, "cost", [&](FieldReader& s) { read_cost(s, cfg.cost); });
  section(r, "lagrange", [&](FieldReader& s) {
    cfg.lagrange.lambda = s.non_negative("lambda", cfg.lagrange.lambda);
    cfg.lagrange.learning_rate = s.positive("learning_rate", cfg.lagrange.learning_rate);
    cfg.lagrange.cost_limit = s.number("cost_limit", cfg.lagrange.cost_limit);
    const std::string agg = s.string("aggregation", "mean");
    if (agg == "mean") {
      cfg.aggregation = CostAggregation::kMean;
    } else if (agg == "discounted") {
      cfg.aggregation = CostAggregation::kDiscounted;
    } else {
      fail(s.field("aggregation"), "must be mean or discounted");
    }
    cfg.discount = s.number("discount", cfg.discount);
    if (!(cfg.discount > 0.0 && cfg.discount <= 1.0)) fail(s.field("discount"), "must lie in (0, 1]");
  });
  section(r, "reward", [&](FieldReader& s) { read_reward(s, cfg); });
  section(r, "controller", [&](FieldReader& s) { read_controller(s, cfg.tracker); });
  section(r, "prediction", [&](FieldReader& s) {
    cfg.prediction.sigma_longitudinal =
        s.positive("sigma_longitudinal_m", cfg.prediction.sigma_longitudinal);
    cfg.prediction.sigma_lateral = s.positive("sigma_lateral_m", cfg.prediction.sigma_lateral);
    cfg.prediction.growth = s.non_negative("growth_per_s", cfg.prediction.growth);
  });
  section(r, "replay", [&](FieldReader& s) {
    cfg.replay_enabled = s.boolean("enabled", false);
    const std::int64_t capacity = s.integer("capacity", static_cast<std::int64_t>(cfg.replay.capacity));
    if (capacity <= 0) fail(s.field("capacity"), "must be positive");
    cfg.replay.capacity = static_cast<std::size_t>(capacity);
    cfg.replay.alpha = s.non_negative("alpha", cfg.replay.alpha);
    cfg.replay.beta_start = s.non_negative("beta_start", cfg.replay.beta_start);
    const std::int64_t steps = s.integer("beta_steps", static_cast<std::int64_t>(cfg.replay.beta_steps));
    if (steps < 0) fail(s.field("beta_steps"), "must be non-negative");
    cfg.replay.beta_steps = static_cast<std::uint64_t>(steps);
    cfg.replay.min_priority = s.positive("min_priority", cfg.replay.min_priority);
    if (cfg.replay.alpha > 1.0) fail(s.field("alpha"), "must lie in [0, 1]");
    if (cfg.replay.beta_start > 1.0) fail(s.field("beta_start"), "must lie in [0, 1]");
  });
  cfg.off_road_margin = r.non_negative("off_road_margin_m", cfg.off_road_margin);
  r.finish();
  return cfg;
}

RunConfig load_run_config(const std::filesystem::path& file) {
  std::ifstream in(file, std::ios::binary);
  if (!in) throw IoError("cannot open config file " + file.string());
  std::ostringstream text;
  text << in.rdbuf();
  return parse_run_config(text.str(), file.string());
}

}  // namespace ethrisk
