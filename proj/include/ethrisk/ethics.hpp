#pragma once

#include <span>
#include <vector>

#include "ethrisk/agent.hpp"
#include "ethrisk/risk.hpp"

namespace ethrisk {

enum class CostMode { kEthical, kSelfish };

struct CostConfig {
  CostMode mode = CostMode::kEthical;
  double w_bayes = 3.33;
  double w_equality = 3.33;
  double w_maximin = 3.33;
  double w_selfish = 10.0;
  double gamma_maximin = 2.0;  // >= 1
  // Risk/harm multipliers for vulnerable road users. 1.0 is equal treatment.
  double cyclist_multiplier = 1.0;
  double pedestrian_multiplier = 1.0;

  // Throws std::invalid_argument on negative weights or gamma < 1.
  void validate() const;
};

// Per-participant risks (ego included) and per-pair worst harms.
struct RiskSet {
  std::vector<double> risks;
  std::vector<double> harms;
};

// Mean risk. Throws EmptyRiskSet.
double bayes_cost(const RiskSet& set);

// Mean absolute pairwise risk difference; 0 for fewer than two participants.
double equality_cost(const RiskSet& set);

// (max harm)^gamma; 0 when there are no harms.
double maximin_cost(const RiskSet& set, double gamma);

// Weighted Bayes + Equality + Maximin. Throws ModeMismatch unless ethical.
double ethical_cost(const RiskSet& set, const CostConfig& cfg);

// w_S times the mean ego-side risk; 0 with no interacting agents.
double selfish_cost(std::span<const double> ego_risks, const CostConfig& cfg);

// Collapses pairwise tuples into the participant risk set: the ego's risk is
// the max over its pairs, then one entry per interacting agent. Agent classes
// (parallel to `tuples`) select the VRU multipliers; results stay in [0, 1].
RiskSet compose_risk_set(std::span<const RiskTuple> tuples, std::span<const AgentClass> classes,
                         const CostConfig& cfg);

// Ego-side risks of the interacting pairs.
std::vector<double> ego_risks(std::span<const RiskTuple> tuples);

}  // namespace ethrisk
