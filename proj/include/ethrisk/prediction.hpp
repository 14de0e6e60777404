#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "ethrisk/agent.hpp"
#include "ethrisk/collision.hpp"

namespace ethrisk {

// Predicted distribution of an agent at one grid time, plus the kinematics
// needed for harm estimation.
struct PredictedState {
  GaussianPrediction gaussian;
  double heading = 0.0;
  Vec2 velocity;
};

// Pluggable trajectory predictor. `offsets` are times after now, seconds;
// the result has one entry per offset, gaussian.step set to its index.
class TrajectoryPredictor {
 public:
  virtual ~TrajectoryPredictor() = default;
  virtual std::vector<PredictedState> predict(const AgentState& agent,
                                              std::span<const double> offsets) const = 0;
};

struct ConstantVelocityConfig {
  double sigma_longitudinal = 0.5;  // m
  double sigma_lateral = 0.25;      // m
  double growth = 0.5;              // 1/s
};

// Propagates the current velocity. Covariance is diag(sl^2, sd^2) in the
// agent's heading frame, inflated by (1 + t * growth), rotated to world.
class ConstantVelocityPredictor final : public TrajectoryPredictor {
 public:
  explicit ConstantVelocityPredictor(ConstantVelocityConfig config = {}) : config_(config) {}
  std::vector<PredictedState> predict(const AgentState& agent,
                                      std::span<const double> offsets) const override;

 private:
  ConstantVelocityConfig config_;
};

// Replays the scripted future of an agent with isotropic Gaussian noise on
// the mean; covariance sigma^2 I. Noise is drawn from a generator seeded by
// `seed`, so a given (track, now, sigma, seed) always predicts the same.
class NoisyReplayPredictor final : public TrajectoryPredictor {
 public:
  using Track = std::function<AgentState(double time)>;

  NoisyReplayPredictor(Track track, double now, double sigma, std::uint64_t seed);
  std::vector<PredictedState> predict(const AgentState& agent,
                                      std::span<const double> offsets) const override;

 private:
  Track track_;
  double now_;
  double sigma_;
  std::uint64_t seed_;
};

}  // namespace ethrisk
