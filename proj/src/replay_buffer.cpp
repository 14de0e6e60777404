#include "ethrisk/replay_buffer.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <istream>
#include <ostream>
#include <stdexcept>
#include <string>

#include "ethrisk/errors.hpp"

namespace ethrisk {

SumTree::SumTree(std::size_t capacity) : capacity_(capacity), leaves_(1) {
  if (capacity == 0) throw std::invalid_argument("sum tree capacity must be positive");
  while (leaves_ < capacity) leaves_ <<= 1;
  nodes_.assign(2 * leaves_, 0.0);
}

void SumTree::set(std::size_t index, double value) {
  if (index >= capacity_) throw std::out_of_range("sum tree index out of range");
  std::size_t node = leaves_ + index;
  nodes_[node] = value;
  for (node >>= 1; node >= 1; node >>= 1) nodes_[node] = nodes_[2 * node] + nodes_[2 * node + 1];
}

std::size_t SumTree::find(double mass) const {
  mass = std::clamp(mass, 0.0, std::nextafter(total(), 0.0));
  std::size_t node = 1;
  while (node < leaves_) {
    const double left = nodes_[2 * node];
    const double right = nodes_[2 * node + 1];
    if (mass < left || right <= 0.0) {
      node = 2 * node;
    } else {
      mass -= left;
      node = 2 * node + 1;
    }
  }
  return std::min(node - leaves_, capacity_ - 1);
}

DynamicPriority dynamic_priority(double td_reward, double td_cost) {
  const double dr = std::abs(td_reward);
  const double dc = std::abs(td_cost);
  DynamicPriority out;
  out.ratio = std::clamp(dr / (dc + kRatioEpsilon), kRatioFloor, kRatioCeiling);
  out.w_cost = 1.0 / (1.0 + out.ratio);
  out.w_reward = 1.0 - out.w_cost;
  out.priority = out.w_reward * dr + out.w_cost * dc;
  return out;
}

void ReplayConfig::validate() const {
  if (capacity == 0) throw std::invalid_argument("replay capacity must be positive");
  if (!(alpha >= 0.0 && alpha <= 1.0)) throw std::invalid_argument("alpha must be in [0, 1]");
  if (!(beta_start >= 0.0 && beta_start <= 1.0)) {
    throw std::invalid_argument("beta_start must be in [0, 1]");
  }
  if (!(min_priority > 0.0)) throw std::invalid_argument("min_priority must be positive");
}

ReplayBuffer::ReplayBuffer(ReplayConfig config)
    : config_(config), tree_((config.validate(), config.capacity)) {
  storage_.resize(config_.capacity);
  priorities_.assign(config_.capacity, 0.0);
}

double ReplayBuffer::beta() const {
  if (config_.beta_steps == 0) return 1.0;
  const double frac =
      static_cast<double>(sampled_) / static_cast<double>(config_.beta_steps);
  return std::min(1.0, config_.beta_start + (1.0 - config_.beta_start) * frac);
}

std::size_t ReplayBuffer::add(Transition transition) {
  const std::size_t index = next_;
  storage_[index] = std::move(transition);
  priorities_[index] = max_priority_;
  tree_.set(index, std::pow(max_priority_, config_.alpha));
  next_ = (next_ + 1) % config_.capacity;
  size_ = std::min(size_ + 1, config_.capacity);
  return index;
}

void ReplayBuffer::update_priority(std::size_t index, double priority) {
  if (index >= size_) throw std::out_of_range("replay index out of range");
  const double p = std::max(std::abs(priority), config_.min_priority);
  priorities_[index] = p;
  max_priority_ = std::max(max_priority_, p);
  tree_.set(index, std::pow(p, config_.alpha));
}

SampledBatch ReplayBuffer::sample(std::size_t k, std::mt19937_64& rng) {
  if (k == 0 || size_ < k) throw BufferUnderfilled("replay buffer holds fewer transitions than requested");
  SampledBatch batch;
  batch.beta = beta();
  const double total = tree_.total();
  const double stratum = total / static_cast<double>(k);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  double max_weight = 0.0;
  for (std::size_t i = 0; i < k; ++i) {
    const double mass = (static_cast<double>(i) + unit(rng)) * stratum;
    const std::size_t index = tree_.find(mass);
    const double probability = tree_.leaf(index) / total;
    const double weight =
        std::pow(static_cast<double>(size_) * probability, -batch.beta);
    batch.indices.push_back(index);
    batch.transitions.push_back(storage_[index]);
    batch.probabilities.push_back(probability);
    batch.weights.push_back(weight);
    max_weight = std::max(max_weight, weight);
  }
  for (double& w : batch.weights) w /= max_weight;
  sampled_ += k;
  return batch;
}

namespace {

static_assert(std::endian::native == std::endian::little,
              "replay snapshots are written in little-endian host order");

constexpr char kMagic[4] = {'E', 'R', 'P', 'B'};
constexpr std::uint32_t kVersion = 1;

template <typename T>
void put(std::string& buf, T value) {
  char bytes[sizeof(T)];
  std::memcpy(bytes, &value, sizeof(T));
  buf.append(bytes, sizeof(T));
}

template <typename T>
void write(std::ostream& out, T value) {
  out.write(reinterpret_cast<const char*>(&value), sizeof(T));
}

template <typename T>
T read(std::istream& in) {
  T value{};
  if (!in.read(reinterpret_cast<char*>(&value), sizeof(T))) {
    throw IoError("truncated replay snapshot");
  }
  return value;
}

class Cursor {
 public:
  explicit Cursor(const std::string& data) : data_(data) {}
  template <typename T>
  T take() {
    if (pos_ + sizeof(T) > data_.size()) throw IoError("corrupt replay record");
    T value{};
    std::memcpy(&value, data_.data() + pos_, sizeof(T));
    pos_ += sizeof(T);
    return value;
  }
  bool done() const { return pos_ == data_.size(); }

 private:
  const std::string& data_;
  std::size_t pos_ = 0;
};

std::string encode(const Transition& t) {
  std::string buf;
  put<std::uint32_t>(buf, static_cast<std::uint32_t>(t.observation.size()));
  for (double v : t.observation) put(buf, v);
  for (double v : t.action) put(buf, v);
  put(buf, t.reward);
  put(buf, t.cost);
  put<std::uint32_t>(buf, static_cast<std::uint32_t>(t.next_observation.size()));
  for (double v : t.next_observation) put(buf, v);
  put<std::uint8_t>(buf, t.done ? 1 : 0);
  return buf;
}

Transition decode(const std::string& data) {
  Cursor c(data);
  Transition t;
  t.observation.resize(c.take<std::uint32_t>());
  for (double& v : t.observation) v = c.take<double>();
  for (double& v : t.action) v = c.take<double>();
  t.reward = c.take<double>();
  t.cost = c.take<double>();
  t.next_observation.resize(c.take<std::uint32_t>());
  for (double& v : t.next_observation) v = c.take<double>();
  t.done = c.take<std::uint8_t>() != 0;
  if (!c.done()) throw IoError("trailing bytes in replay record");
  return t;
}

}  // namespace

void ReplayBuffer::save(std::ostream& out) const {
  out.write(kMagic, sizeof(kMagic));
  write(out, kVersion);
  write<std::uint64_t>(out, config_.capacity);
  write<std::uint64_t>(out, size_);
  write<std::uint64_t>(out, next_);
  write(out, config_.alpha);
  write(out, config_.beta_start);
  write<std::uint64_t>(out, config_.beta_steps);
  write(out, config_.min_priority);
  write(out, max_priority_);
  write<std::uint64_t>(out, sampled_);
  for (std::size_t i = 0; i < size_; ++i) {
    const std::string record = encode(storage_[i]);
    write<std::uint32_t>(out, static_cast<std::uint32_t>(record.size()));
    out.write(record.data(), static_cast<std::streamsize>(record.size()));
  }
  for (std::size_t i = 0; i < size_; ++i) write(out, priorities_[i]);
  if (!out) throw IoError("failed to write replay snapshot");
}

ReplayBuffer ReplayBuffer::load(std::istream& in) {
  char magic[4];
  if (!in.read(magic, sizeof(magic)) || std::memcmp(magic, kMagic, sizeof(kMagic)) != 0) {
    throw IoError("not a replay snapshot (bad magic)");
  }
  if (read<std::uint32_t>(in) != kVersion) throw IoError("unsupported replay snapshot version");

  ReplayConfig cfg;
  cfg.capacity = read<std::uint64_t>(in);
  const auto size = read<std::uint64_t>(in);
  const auto next = read<std::uint64_t>(in);
  cfg.alpha = read<double>(in);
  cfg.beta_start = read<double>(in);
  cfg.beta_steps = read<std::uint64_t>(in);
  cfg.min_priority = read<double>(in);
  const double max_priority = read<double>(in);
  const auto sampled = read<std::uint64_t>(in);
  if (size > cfg.capacity || next >= cfg.capacity) throw IoError("inconsistent replay snapshot header");

  ReplayBuffer buffer(cfg);
  for (std::size_t i = 0; i < size; ++i) {
    const auto len = read<std::uint32_t>(in);
    std::string record(len, '\0');
    if (!in.read(record.data(), len)) throw IoError("truncated replay record");
    buffer.storage_[i] = decode(record);
  }
  for (std::size_t i = 0; i < size; ++i) {
    buffer.priorities_[i] = read<double>(in);
    buffer.tree_.set(i, std::pow(buffer.priorities_[i], cfg.alpha));
  }
  buffer.size_ = size;
  buffer.next_ = next;
  buffer.max_priority_ = max_priority;
  buffer.sampled_ = sampled;
  return buffer;
}

}  // namespace ethrisk
