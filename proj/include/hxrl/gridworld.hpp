#pragma once

// Deterministic absorbing gridworld (spaceship escape). States are numbered
// row-major from the top-left corner: state = row * width + column.

#include <array>
#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

namespace hxrl {

using StateId = int;

enum class Action : int { Up = 0, Down = 1, Left = 2, Right = 3 };

inline constexpr int kNumActions = 4;
inline constexpr std::array<Action, kNumActions> kAllActions{Action::Up, Action::Down, Action::Left,
                                                            Action::Right};

constexpr int index(Action a) { return static_cast<int>(a); }
constexpr Action action_from_index(int i) { return static_cast<Action>(i); }
constexpr Action opposite(Action a) {
  switch (a) {
    case Action::Up: return Action::Down;
    case Action::Down: return Action::Up;
    case Action::Left: return Action::Right;
    case Action::Right: return Action::Left;
  }
  return a;
}

// Lower-case canonical name: "up", "down", "left", "right".
std::string_view action_name(Action a);
std::optional<Action> parse_action(std::string_view name);

// Small bitset over the four actions, iterated in canonical index order.
class ActionSet {
 public:
  constexpr ActionSet() = default;
  constexpr ActionSet(std::initializer_list<Action> actions) {
    for (Action a : actions) insert(a);
  }

  constexpr void insert(Action a) { bits_ |= static_cast<std::uint8_t>(1u << index(a)); }
  constexpr bool contains(Action a) const { return (bits_ >> index(a)) & 1u; }
  constexpr bool empty() const { return bits_ == 0; }
  constexpr int size() const {
    int n = 0;
    for (int i = 0; i < kNumActions; ++i) n += (bits_ >> i) & 1u;
    return n;
  }
  // i-th member in index order; i must be < size().
  Action nth(int i) const;
  std::vector<Action> to_vector() const;

  friend constexpr bool operator==(ActionSet, ActionSet) = default;

 private:
  std::uint8_t bits_ = 0;
};

struct GridConfig {
  int width = 10;
  int height = 10;
  std::vector<StateId> failure_states;
  // The shield cell. Optional so that tiny test layouts do not need a third cell.
  std::optional<StateId> waypoint_state;
  StateId final_goal_state = 0;
  StateId start_state = 0;
  double reward_failure = -100.0;
  double reward_subgoal = 200.0;
  double reward_final = 500.0;
  double reward_step = 0.0;

  int num_states() const { return width * height; }
  bool contains(StateId s) const { return s >= 0 && s < num_states(); }
  bool is_failure(StateId s) const;
  int row(StateId s) const { return s / width; }
  int col(StateId s) const { return s % width; }

  // Throws DomainError describing the first broken invariant.
  void validate() const;

  friend bool operator==(const GridConfig&, const GridConfig&) = default;
};

// 10x10 maze: black holes {3, 13, 20, 22}, start 0, shield 93, wormhole 7.
GridConfig default_layout();

struct TaskSpec {
  int id = 1;
  StateId start_state = 0;
  StateId goal_state = 0;
  int max_steps = 1;
  int episodes = 1;

  friend bool operator==(const TaskSpec&, const TaskSpec&) = default;
};

enum class Terminal { None, Goal, Failure, Truncated };

std::string_view terminal_name(Terminal t);

struct StepOutcome {
  StateId next_state = 0;
  double reward = 0.0;
  Terminal terminal = Terminal::None;

  friend bool operator==(const StepOutcome&, const StepOutcome&) = default;
};

// Actions that keep the agent inside the grid. Throws DomainError on a bad id.
ActionSet valid_actions(StateId state, const GridConfig& config);

// Adjacent cell in the action's direction. Throws ContractViolation when the
// move would leave the grid.
StateId neighbor(StateId state, Action action, const GridConfig& config);

// What happens on entering `state` while pursuing `task`: Goal, Failure
// (black hole, or the wormhole without the shield) or None.
Terminal entry_event(StateId state, const TaskSpec& task, const GridConfig& config);

inline bool is_terminal(StateId state, const TaskSpec& task, const GridConfig& config) {
  return entry_event(state, task, config) != Terminal::None;
}

StepOutcome step(StateId state, Action action, const TaskSpec& task, const GridConfig& config);

}  // namespace hxrl
