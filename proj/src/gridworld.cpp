#include "hxrl/gridworld.hpp"

#include <algorithm>
#include <string>

#include "hxrl/errors.hpp"

namespace hxrl {

std::string_view action_name(Action a) {
  switch (a) {
    case Action::Up: return "up";
    case Action::Down: return "down";
    case Action::Left: return "left";
    case Action::Right: return "right";
  }
  return "?";
}

std::optional<Action> parse_action(std::string_view name) {
  for (Action a : kAllActions)
    if (action_name(a) == name) return a;
  return std::nullopt;
}

std::string_view terminal_name(Terminal t) {
  switch (t) {
    case Terminal::None: return "None";
    case Terminal::Goal: return "Goal";
    case Terminal::Failure: return "Failure";
    case Terminal::Truncated: return "Truncated";
  }
  return "?";
}

Action ActionSet::nth(int i) const {
  for (Action a : kAllActions) {
    if (!contains(a)) continue;
    if (i-- == 0) return a;
  }
  throw ContractViolation("ActionSet::nth index out of range");
}

std::vector<Action> ActionSet::to_vector() const {
  std::vector<Action> out;
  for (Action a : kAllActions)
    if (contains(a)) out.push_back(a);
  return out;
}

bool GridConfig::is_failure(StateId s) const {
  return std::find(failure_states.begin(), failure_states.end(), s) != failure_states.end();
}

void GridConfig::validate() const {
  if (width <= 0 || height <= 0) throw DomainError("grid dimensions must be positive");
  auto check_range = [&](StateId s, const char* what) {
    if (!contains(s))
      throw DomainError(std::string(what) + " " + std::to_string(s) + " is outside the grid");
  };
  for (StateId s : failure_states) check_range(s, "failure state");
  check_range(start_state, "start_state");
  check_range(final_goal_state, "final_goal_state");
  if (waypoint_state) check_range(*waypoint_state, "waypoint_state");

  if (start_state == final_goal_state) throw DomainError("start_state equals final_goal_state");
  if (waypoint_state && (*waypoint_state == start_state || *waypoint_state == final_goal_state))
    throw DomainError("waypoint_state must differ from start_state and final_goal_state");
  for (StateId s : {start_state, final_goal_state})
    if (is_failure(s)) throw DomainError("state " + std::to_string(s) + " is a failure state");
  if (waypoint_state && is_failure(*waypoint_state))
    throw DomainError("waypoint_state is a failure state");
}

GridConfig default_layout() {
  GridConfig g;
  g.width = 10;
  g.height = 10;
  g.failure_states = {3, 13, 20, 22};
  g.waypoint_state = 93;
  g.final_goal_state = 7;
  g.start_state = 0;
  return g;
}

ActionSet valid_actions(StateId state, const GridConfig& config) {
  if (!config.contains(state))
    throw DomainError("state " + std::to_string(state) + " is outside the grid");
  const int r = config.row(state);
  const int c = config.col(state);
  ActionSet out;
  if (r > 0) out.insert(Action::Up);
  if (r + 1 < config.height) out.insert(Action::Down);
  if (c > 0) out.insert(Action::Left);
  if (c + 1 < config.width) out.insert(Action::Right);
  return out;
}

StateId neighbor(StateId state, Action action, const GridConfig& config) {
  if (!valid_actions(state, config).contains(action))
    throw ContractViolation("action " + std::string(action_name(action)) + " leaves the grid at state " +
                            std::to_string(state));
  switch (action) {
    case Action::Up: return state - config.width;
    case Action::Down: return state + config.width;
    case Action::Left: return state - 1;
    case Action::Right: return state + 1;
  }
  return state;
}

Terminal entry_event(StateId state, const TaskSpec& task, const GridConfig& config) {
  if (state == task.goal_state) return Terminal::Goal;
  if (config.is_failure(state)) return Terminal::Failure;
  // Without the shield the wormhole destroys the ship.
  if (state == config.final_goal_state) return Terminal::Failure;
  return Terminal::None;
}

StepOutcome step(StateId state, Action action, const TaskSpec& task, const GridConfig& config) {
  StepOutcome out;
  out.next_state = neighbor(state, action, config);
  out.terminal = entry_event(out.next_state, task, config);
  switch (out.terminal) {
    case Terminal::Goal:
      out.reward = task.goal_state == config.final_goal_state ? config.reward_final : config.reward_subgoal;
      break;
    case Terminal::Failure: out.reward = config.reward_failure; break;
    default: out.reward = config.reward_step; break;
  }
  return out;
}

}  // namespace hxrl
