#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "ethrisk/observation.hpp"
#include "ethrisk/planner.hpp"

namespace ethrisk {

// Recurrent state carried between calls. The built-in policies only count
// decisions; a learned actor would keep its hidden vector here.
struct PolicyState {
  std::uint64_t step = 0;
  std::vector<double> hidden;

  bool operator==(const PolicyState&) const = default;
};

class Policy {
 public:
  virtual ~Policy() = default;
  virtual std::pair<PlanAction, PolicyState> act(const Observation& observation,
                                                 const PolicyState& state) const = 0;
  virtual std::string name() const = 0;
};

// Holds the lane center at the desired speed with a 2 s horizon.
class LaneKeepPolicy final : public Policy {
 public:
  explicit LaneKeepPolicy(double desired_speed, double lane_offset = 0.0)
      : desired_speed_(desired_speed), lane_offset_(lane_offset) {}
  std::pair<PlanAction, PolicyState> act(const Observation& observation,
                                         const PolicyState& state) const override;
  std::string name() const override { return "lane_keep"; }

 private:
  double desired_speed_;
  double lane_offset_;
};

// Replays a fixed action list, then repeats the last action.
class ScriptedPolicy final : public Policy {
 public:
  ScriptedPolicy(std::string name, std::vector<PlanAction> actions);
  std::pair<PlanAction, PolicyState> act(const Observation& observation,
                                         const PolicyState& state) const override;
  std::string name() const override { return name_; }

 private:
  std::string name_;
  std::vector<PlanAction> actions_;
};

// Uniform actions inside the bounds. The draw for decision k depends only on
// (seed, k), so a fixed seed reproduces the same sequence.
class RandomBoundedPolicy final : public Policy {
 public:
  RandomBoundedPolicy(std::uint64_t seed, ActionBounds bounds = {})
      : seed_(seed), bounds_(bounds) {}
  std::pair<PlanAction, PolicyState> act(const Observation& observation,
                                         const PolicyState& state) const override;
  std::string name() const override { return "random"; }

 private:
  std::uint64_t seed_;
  ActionBounds bounds_;
};

}  // namespace ethrisk
