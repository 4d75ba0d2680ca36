// Fixed-capacity ring replay buffer with seeded uniform sampling.
#pragma once

#include <cstddef>
#include <stdexcept>
#include <vector>

#include "smartran/mlp.hpp"
#include "smartran/rng.hpp"

namespace smartran {

template <typename ActionT>
struct Transition {
  VectorXd state;
  ActionT action;
  double reward = 0.0;
  VectorXd next_state;
  bool done = false;
};

template <typename ActionT>
class ReplayBuffer {
 public:
  explicit ReplayBuffer(std::size_t capacity) : capacity_(capacity) {
    if (capacity == 0) throw std::invalid_argument("ReplayBuffer: capacity must be positive");
    data_.reserve(capacity);
  }

  void push(Transition<ActionT> t) {
    if (data_.size() < capacity_) {
      data_.push_back(std::move(t));
    } else {
      data_[head_] = std::move(t);
    }
    head_ = (head_ + 1) % capacity_;
  }

  std::size_t size() const { return data_.size(); }
  std::size_t capacity() const { return capacity_; }
  const Transition<ActionT>& at(std::size_t i) const { return data_.at(i); }

  // uniform with replacement
  std::vector<const Transition<ActionT>*> sample(int batch, Rng& rng) const {
    if (data_.empty()) throw std::runtime_error("ReplayBuffer: sample from empty buffer");
    std::vector<const Transition<ActionT>*> out;
    out.reserve(batch);
    for (int i = 0; i < batch; ++i)
      out.push_back(&data_[rng.uniform_int(static_cast<std::uint64_t>(data_.size()))]);
    return out;
  }

 private:
  std::size_t capacity_;
  std::size_t head_ = 0;
  std::vector<Transition<ActionT>> data_;
};

}  // namespace smartran
