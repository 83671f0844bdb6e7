#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "hxrl/errors.hpp"
#include "hxrl/gridworld.hpp"

namespace hxrl {

// Dense (num_states x 4) table indexed by (state, action), row-major.
template <class T>
class StateActionMatrix {
 public:
  StateActionMatrix() = default;
  explicit StateActionMatrix(int num_states, T fill = T{})
      : num_states_(num_states), data_(static_cast<std::size_t>(num_states) * kNumActions, fill) {
    if (num_states < 0) throw DomainError("negative state count");
  }

  int num_states() const { return num_states_; }

  T& at(StateId s, Action a) { return data_[offset(s, a)]; }
  const T& at(StateId s, Action a) const { return data_[offset(s, a)]; }
  T& at(StateId s, int a) { return data_[offset(s, action_from_index(a))]; }
  const T& at(StateId s, int a) const { return data_[offset(s, action_from_index(a))]; }

  std::span<T> row(StateId s) { return {data_.data() + offset(s, Action::Up), kNumActions}; }
  std::span<const T> row(StateId s) const {
    return {data_.data() + offset(s, Action::Up), kNumActions};
  }

  std::span<T> flat() { return data_; }
  std::span<const T> flat() const { return data_; }

  bool same_shape(const StateActionMatrix& other) const { return num_states_ == other.num_states_; }

  friend bool operator==(const StateActionMatrix&, const StateActionMatrix&) = default;

 private:
  std::size_t offset(StateId s, Action a) const {
    if (s < 0 || s >= num_states_) throw DomainError("state id out of range");
    return static_cast<std::size_t>(s) * kNumActions + static_cast<std::size_t>(index(a));
  }

  int num_states_ = 0;
  std::vector<T> data_;
};

}  // namespace hxrl
