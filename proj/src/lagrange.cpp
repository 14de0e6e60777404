#include "ethrisk/lagrange.hpp"

#include <algorithm>
#include <stdexcept>

namespace ethrisk {

LagrangeState lagrange_update(const LagrangeState& state, double episode_cost) {
  if (!(state.learning_rate > 0.0)) throw std::invalid_argument("learning rate must be positive");
  LagrangeState next = state;
  next.lambda = std::max(0.0, state.lambda + state.learning_rate * (episode_cost - state.cost_limit));
  return next;
}

double aggregate_episode_cost(std::span<const double> step_costs, CostAggregation mode,
                              double discount) {
  if (step_costs.empty()) return 0.0;
  if (mode == CostAggregation::kMean) {
    double sum = 0.0;
    for (double c : step_costs) sum += c;
    return sum / static_cast<double>(step_costs.size());
  }
  double sum = 0.0;
  double weight = 1.0;
  for (double c : step_costs) {
    sum += weight * c;
    weight *= discount;
  }
  return sum;
}

}  // namespace ethrisk
