#include "ethrisk/ethics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "ethrisk/errors.hpp"

namespace ethrisk {

void CostConfig::validate() const {
  for (double w : {w_bayes, w_equality, w_maximin, w_selfish, cyclist_multiplier,
                   pedestrian_multiplier}) {
    if (!(w >= 0.0)) throw std::invalid_argument("cost weights must be non-negative");
  }
  if (!(gamma_maximin >= 1.0)) throw std::invalid_argument("gamma_maximin must be >= 1");
}

double bayes_cost(const RiskSet& set) {
  if (set.risks.empty()) throw EmptyRiskSet("Bayes cost of an empty risk set");
  return std::accumulate(set.risks.begin(), set.risks.end(), 0.0) /
         static_cast<double>(set.risks.size());
}

double equality_cost(const RiskSet& set) {
  const std::size_t n = set.risks.size();
  if (n < 2) return 0.0;
  double total = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) total += std::abs(set.risks[i] - set.risks[j]);
  }
  return total / (static_cast<double>(n) * static_cast<double>(n - 1) / 2.0);
}

double maximin_cost(const RiskSet& set, double gamma) {
  if (set.harms.empty()) return 0.0;
  return std::pow(*std::max_element(set.harms.begin(), set.harms.end()), gamma);
}

double ethical_cost(const RiskSet& set, const CostConfig& cfg) {
  if (cfg.mode != CostMode::kEthical) throw ModeMismatch("ethical cost requested in selfish mode");
  if (set.risks.empty() && set.harms.empty()) return 0.0;
  return cfg.w_bayes * bayes_cost(set) + cfg.w_equality * equality_cost(set) +
         cfg.w_maximin * maximin_cost(set, cfg.gamma_maximin);
}

double selfish_cost(std::span<const double> ego_risks, const CostConfig& cfg) {
  if (cfg.mode != CostMode::kSelfish) throw ModeMismatch("selfish cost requested in ethical mode");
  if (ego_risks.empty()) return 0.0;
  return cfg.w_selfish * std::accumulate(ego_risks.begin(), ego_risks.end(), 0.0) /
         static_cast<double>(ego_risks.size());
}

RiskSet compose_risk_set(std::span<const RiskTuple> tuples, std::span<const AgentClass> classes,
                         const CostConfig& cfg) {
  if (tuples.size() != classes.size()) {
    throw std::invalid_argument("risk tuples and agent classes differ in length");
  }
  RiskSet set;
  double ego = 0.0;
  bool any = false;
  for (std::size_t i = 0; i < tuples.size(); ++i) {
    const RiskTuple& t = tuples[i];
    if (!t.interacting) continue;
    any = true;
    ego = std::max(ego, t.r_ego);
    double weight = 1.0;
    if (classes[i] == AgentClass::kCyclist) weight = cfg.cyclist_multiplier;
    if (classes[i] == AgentClass::kPedestrian) weight = cfg.pedestrian_multiplier;
    set.risks.push_back(std::min(1.0, weight * t.r_obj));
    set.harms.push_back(std::min(1.0, weight * t.h_worst));
  }
  if (any) set.risks.insert(set.risks.begin(), ego);
  return set;
}

std::vector<double> ego_risks(std::span<const RiskTuple> tuples) {
  std::vector<double> out;
  for (const RiskTuple& t : tuples) {
    if (t.interacting) out.push_back(t.r_ego);
  }
  return out;
}

}  // namespace ethrisk
