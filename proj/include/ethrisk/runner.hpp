#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "ethrisk/config.hpp"
#include "ethrisk/policy.hpp"
#include "ethrisk/replay_buffer.hpp"
#include "ethrisk/reward.hpp"
#include "ethrisk/scenario.hpp"

namespace ethrisk {

struct AgentTtc {
  std::string id;
  double ttc = kInfiniteTtc;

  bool operator==(const AgentTtc&) const = default;
};

// One simulation step. Pose fields describe the ego after the step; risks,
// costs and TTC are evaluated on the state before it.
struct StepRecord {
  int step = 0;
  double time = 0.0;  // s, start of the step
  double x = 0.0;     // rear axle, m
  double y = 0.0;
  double heading = 0.0;
  double speed = 0.0;
  double accel = 0.0;  // speed change over the step, m/s^2
  double jerk = 0.0;   // accel change over the step, m/s^3; 0 on the first step
  double yaw_rate = 0.0;
  double steer = 0.0;
  double l = 0.0;  // footprint center in path coordinates
  double d = 0.0;
  PlanAction action;
  int agent_count = 0;
  std::vector<AgentTtc> ttc;
  double min_ttc = kInfiniteTtc;
  double ego_risk = 0.0;        // max over pairs of R_ego
  double max_other_risk = 0.0;  // max over pairs of R_obj
  double ethical_cost = 0.0;
  double selfish_cost = 0.0;
  double cost = 0.0;  // fed back to the learner; 0 in standard mode
  RewardBreakdown reward;

  bool operator==(const StepRecord&) const = default;
};

struct EpisodeLog {
  std::string scenario;
  std::string policy;
  RunMode mode = RunMode::kEthical;
  std::uint64_t seed = 0;
  std::vector<StepRecord> records;
  TerminalEvent terminal = TerminalEvent::kNone;
  double episode_return = 0.0;  // sum of step rewards
  double episode_cost = 0.0;    // aggregated step costs
  LagrangeState lagrange_before;
  LagrangeState lagrange_after;  // unchanged in standard mode

  bool operator==(const EpisodeLog&) const = default;
};

// Built-in policies by name: "lane_keep", "random", or any scripted policy
// defined by the scenario. Throws ValidationError for unknown names.
std::unique_ptr<Policy> make_policy(const std::string& name, const Scenario& scenario,
                                    std::uint64_t seed, const RunConfig& config = {});

// Runs one episode at 0.1 s steps. Each step observes, asks the policy,
// plans, evaluates pairwise risk and cost, tracks the plan for one step,
// advances the agents, checks for termination (collision, then off-road,
// then destination, then duration) and scores the step. Library errors are
// rethrown as StepError. When `replay` is given every step is stored there.
EpisodeLog run_episode(const Scenario& scenario, const Policy& policy, const RunConfig& config,
                       std::uint64_t seed, ReplayBuffer* replay = nullptr);

// JSON form of a log. Infinite TTC is written as null.
std::string log_to_json(const EpisodeLog& log);
EpisodeLog log_from_json(std::string_view text, const std::string& source = "<log>");

}  // namespace ethrisk
