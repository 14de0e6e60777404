#pragma once

#include <span>

namespace ethrisk {

struct LagrangeState {
  double lambda = 0.0;
  double learning_rate = 0.05;
  double cost_limit = 0.6;

  bool operator==(const LagrangeState&) const = default;
};

// Projected gradient ascent on lambda * (D - eta).
LagrangeState lagrange_update(const LagrangeState& state, double episode_cost);

enum class CostAggregation { kMean, kDiscounted };

// Per-episode cost estimate compared against the limit: the undiscounted mean
// of step costs, or the discounted sum.
double aggregate_episode_cost(std::span<const double> step_costs, CostAggregation mode,
                              double discount = 0.99);

}  // namespace ethrisk
