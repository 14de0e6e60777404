#include "ethrisk/prediction.hpp"

#include <cmath>
#include <random>
#include <stdexcept>
#include <utility>

namespace ethrisk {

std::vector<PredictedState> ConstantVelocityPredictor::predict(
    const AgentState& agent, std::span<const double> offsets) const {
  const double c = std::cos(agent.heading);
  const double s = std::sin(agent.heading);
  const double var_l = config_.sigma_longitudinal * config_.sigma_longitudinal;
  const double var_d = config_.sigma_lateral * config_.sigma_lateral;
  // R diag(var_l, var_d) R^T
  const Covariance2 base{c * c * var_l + s * s * var_d, c * s * (var_l - var_d),
                         s * s * var_l + c * c * var_d};

  std::vector<PredictedState> out;
  out.reserve(offsets.size());
  const Vec2 velocity = agent.velocity();
  for (std::size_t k = 0; k < offsets.size(); ++k) {
    const double t = offsets[k];
    PredictedState p;
    p.gaussian.mean = agent.position + velocity * t;
    p.gaussian.covariance = base.scaled(1.0 + t * config_.growth);
    p.gaussian.step = static_cast<int>(k);
    p.heading = agent.heading;
    p.velocity = velocity;
    out.push_back(p);
  }
  return out;
}

NoisyReplayPredictor::NoisyReplayPredictor(Track track, double now, double sigma,
                                           std::uint64_t seed)
    : track_(std::move(track)), now_(now), sigma_(sigma), seed_(seed) {
  if (!(sigma > 0.0)) throw std::invalid_argument("prediction noise sigma must be positive");
}

std::vector<PredictedState> NoisyReplayPredictor::predict(const AgentState& /*agent*/,
                                                          std::span<const double> offsets) const {
  std::mt19937_64 rng(seed_);
  std::normal_distribution<double> noise(0.0, sigma_);
  const double var = sigma_ * sigma_;

  std::vector<PredictedState> out;
  out.reserve(offsets.size());
  for (std::size_t k = 0; k < offsets.size(); ++k) {
    const AgentState future = track_(now_ + offsets[k]);
    PredictedState p;
    const double nx = noise(rng);
    const double ny = noise(rng);
    p.gaussian.mean = future.position + Vec2{nx, ny};
    p.gaussian.covariance = {var, 0.0, var};
    p.gaussian.step = static_cast<int>(k);
    p.heading = future.heading;
    p.velocity = future.velocity();
    out.push_back(p);
  }
  return out;
}

}  // namespace ethrisk
