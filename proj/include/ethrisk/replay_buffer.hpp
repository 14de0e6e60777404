#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <random>
#include <vector>

namespace ethrisk {

struct Transition {
  std::vector<double> observation;
  std::array<double, 3> action{};  // normalized PlanAction
  double reward = 0.0;
  double cost = 0.0;
  std::vector<double> next_observation;
  bool done = false;

  bool operator==(const Transition&) const = default;
};

// Array-backed binary sum tree over a fixed number of leaves.
class SumTree {
 public:
  explicit SumTree(std::size_t capacity);

  std::size_t capacity() const { return capacity_; }
  double total() const { return nodes_[1]; }
  double leaf(std::size_t index) const { return nodes_[leaves_ + index]; }

  // Sets a leaf and recomputes its ancestors from their children.
  void set(std::size_t index, double value);

  // Leaf whose cumulative range contains `mass`. Never returns a zero leaf
  // while the total is positive.
  std::size_t find(double mass) const;

 private:
  std::size_t capacity_;
  std::size_t leaves_;  // power of two >= capacity
  std::vector<double> nodes_;
};

struct DynamicPriority {
  double priority = 0.0;
  double w_reward = 0.5;
  double w_cost = 0.5;
  double ratio = 1.0;
};

inline constexpr double kRatioFloor = 0.2;
inline constexpr double kRatioCeiling = 5.0;
inline constexpr double kRatioEpsilon = 1e-8;

// Blends reward and cost TD-error magnitudes with weights set by their
// clipped ratio. w_reward + w_cost == 1 exactly.
DynamicPriority dynamic_priority(double td_reward, double td_cost);

struct ReplayConfig {
  std::size_t capacity = 100000;
  double alpha = 0.6;
  double beta_start = 0.4;
  std::uint64_t beta_steps = 100000;  // sampled transitions until beta reaches 1
  double min_priority = 1e-6;

  void validate() const;
};

struct SampledBatch {
  std::vector<std::size_t> indices;
  std::vector<Transition> transitions;
  std::vector<double> probabilities;
  std::vector<double> weights;  // importance weights divided by the batch max
  double beta = 0.0;
};

// Proportional prioritized replay with FIFO eviction. New transitions get
// the current maximum priority (1.0 when empty). One writer and one sampler,
// coordinated externally.
class ReplayBuffer {
 public:
  explicit ReplayBuffer(ReplayConfig config);

  const ReplayConfig& config() const { return config_; }
  std::size_t size() const { return size_; }
  std::size_t capacity() const { return config_.capacity; }
  const Transition& at(std::size_t index) const { return storage_.at(index); }
  double priority(std::size_t index) const { return priorities_.at(index); }
  double max_priority() const { return max_priority_; }
  const SumTree& tree() const { return tree_; }

  // Current importance exponent, annealed linearly to 1.
  double beta() const;

  std::size_t add(Transition transition);
  void update_priority(std::size_t index, double priority);

  // Stratified sampling: [0, total) split into k equal strata, one uniform
  // draw each. Throws BufferUnderfilled when size() < k.
  SampledBatch sample(std::size_t k, std::mt19937_64& rng);

  // Binary snapshot; layout documented in docs/replay_snapshot.md.
  void save(std::ostream& out) const;
  static ReplayBuffer load(std::istream& in);

 private:
  ReplayConfig config_;
  std::vector<Transition> storage_;
  std::vector<double> priorities_;
  SumTree tree_;
  std::size_t size_ = 0;
  std::size_t next_ = 0;
  double max_priority_ = 1.0;
  std::uint64_t sampled_ = 0;
};

}  // namespace ethrisk
