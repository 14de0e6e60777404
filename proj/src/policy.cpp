#include "ethrisk/policy.hpp"

#include <random>
#include <stdexcept>

namespace ethrisk {

std::pair<PlanAction, PolicyState> LaneKeepPolicy::act(const Observation&,
                                                       const PolicyState& state) const {
  PolicyState next = state;
  ++next.step;
  return {PlanAction{2.0, lane_offset_, desired_speed_}, next};
}

ScriptedPolicy::ScriptedPolicy(std::string name, std::vector<PlanAction> actions)
    : name_(std::move(name)), actions_(std::move(actions)) {
  if (actions_.empty()) throw std::invalid_argument("scripted policy needs at least one action");
}

std::pair<PlanAction, PolicyState> ScriptedPolicy::act(const Observation&,
                                                       const PolicyState& state) const {
  const std::size_t index =
      state.step < actions_.size() ? static_cast<std::size_t>(state.step) : actions_.size() - 1;
  PolicyState next = state;
  ++next.step;
  return {actions_[index], next};
}

std::pair<PlanAction, PolicyState> RandomBoundedPolicy::act(const Observation&,
                                                            const PolicyState& state) const {
  std::seed_seq seq{static_cast<std::uint32_t>(seed_), static_cast<std::uint32_t>(seed_ >> 32),
                    static_cast<std::uint32_t>(state.step),
                    static_cast<std::uint32_t>(state.step >> 32)};
  std::mt19937_64 rng(seq);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  std::array<double, 3> normalized{};
  for (double& v : normalized) v = unit(rng);
  PolicyState next = state;
  ++next.step;
  return {denormalize_action(normalized, bounds_), next};
}

}  // namespace ethrisk
