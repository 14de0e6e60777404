#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>

#include "ethrisk/control.hpp"
#include "ethrisk/ethics.hpp"
#include "ethrisk/lagrange.hpp"
#include "ethrisk/prediction.hpp"
#include "ethrisk/replay_buffer.hpp"
#include "ethrisk/reward.hpp"
#include "ethrisk/risk.hpp"

namespace ethrisk {

// How the per-step cost feeds back. Standard computes and logs the ethical
// cost but never uses it: the multiplier stays put and stored transitions
// carry zero cost.
enum class RunMode { kEthical, kSelfish, kStandard };

std::string_view to_string(RunMode mode);
RunMode run_mode_from_string(std::string_view name);  // throws ValidationError

struct RunConfig {
  RunMode mode = RunMode::kEthical;
  CostConfig cost;
  LagrangeState lagrange;
  CostAggregation aggregation = CostAggregation::kMean;
  double discount = 0.99;
  RewardConfig reward;
  std::optional<double> desired_speed;  // defaults to 0.9 * scenario v_max
  TrackerConfig tracker;
  ConstantVelocityConfig prediction;
  HarmModel harm;
  double off_road_margin = 0.2;  // m beyond half the road width
  bool replay_enabled = false;
  ReplayConfig replay;

  // Cost configuration matching `mode` (ethical for standard runs).
  CostConfig effective_cost() const;
};

// Missing members keep their defaults; unknown members are rejected.
RunConfig parse_run_config(std::string_view text, const std::string& source = "<config>");
RunConfig load_run_config(const std::filesystem::path& file);

}  // namespace ethrisk
