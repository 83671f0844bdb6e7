#include "hxrl/hierarchy.hpp"

#include <deque>
#include <exception>
#include <string>

#include "hxrl/errors.hpp"

namespace hxrl {

std::vector<TaskSpec> default_tasks() {
  return {
      {.id = 1, .start_state = 0, .goal_state = 31, .max_steps = 10, .episodes = 10000},
      {.id = 2, .start_state = 31, .goal_state = 93, .max_steps = 100, .episodes = 15000},
      {.id = 3, .start_state = 93, .goal_state = 7, .max_steps = 100, .episodes = 20000},
  };
}

std::uint64_t task_seed(std::uint64_t run_seed, const TaskSpec& task) {
  return derive_seed(run_seed, static_cast<std::uint64_t>(task.id));
}

void validate_task(const TaskSpec& task, const GridConfig& config) {
  const std::string name = "task " + std::to_string(task.id);
  if (!config.contains(task.start_state)) throw DomainError(name + ": start_state outside the grid");
  if (!config.contains(task.goal_state)) throw DomainError(name + ": goal_state outside the grid");
  if (config.is_failure(task.goal_state)) throw DomainError(name + ": goal_state is a failure state");
  if (task.start_state == task.goal_state) throw DomainError(name + ": start_state equals goal_state");
  if (is_terminal(task.start_state, task, config)) throw DomainError(name + ": start_state is terminal");
  if (task.max_steps <= 0) throw DomainError(name + ": max_steps must be positive");
  if (task.episodes <= 0) throw DomainError(name + ": episodes must be positive");
}

std::vector<std::string> check_task_chain(std::span<const TaskSpec> tasks) {
  std::vector<std::string> warnings;
  for (std::size_t i = 1; i < tasks.size(); ++i)
    if (tasks[i].start_state != tasks[i - 1].goal_state)
      warnings.push_back("task " + std::to_string(tasks[i].id) + " starts at " +
                         std::to_string(tasks[i].start_state) + " but task " + std::to_string(tasks[i - 1].id) +
                         " ends at " + std::to_string(tasks[i - 1].goal_state));
  return warnings;
}

TaskArtifact train_task(const TaskSpec& task, const GridConfig& config, const Hyperparams& hp,
                        const TrainOptions& options) {
  config.validate();
  validate_task(task, config);
  hp.validate();

  const int n = config.num_states();
  Rng rng(task_seed(hp.seed, task));
  QFunction q = make_backend(options.backend, n, options.hidden_size, rng);
  EpisodicMemory memory(n);
  std::uint64_t succeeded = 0;

  for (int episode = 0; episode < task.episodes; ++episode) {
    memory.begin_episode();
    StateId s = task.start_state;
    bool reached_goal = false;
    for (int t = 0; t < task.max_steps; ++t) {
      const ActionSet valid = valid_actions(s, config);
      const Action a = select_action(q_values(q, s), valid, hp.epsilon, rng);
      const StepOutcome out = step(s, a, task, config);
      memory.record(s, a);
      const bool terminal = out.terminal != Terminal::None;
      // Hitting the step cap is not a terminal state: the target still bootstraps.
      td_update(q, {s, a, out.reward, out.next_state, terminal},
                terminal ? ActionSet{} : valid_actions(out.next_state, config), hp);
      s = out.next_state;
      if (terminal) {
        reached_goal = out.terminal == Terminal::Goal;
        break;
      }
    }
    memory.end_episode(reached_goal);
    if (reached_goal) ++succeeded;
  }

  return {task, std::move(q), memory.t_total(), memory.t_success(), memory.probabilities(), succeeded};
}

namespace {

HierarchyArtifact assemble(const GridConfig& config, const Hyperparams& hp, const TrainOptions& options,
                           std::vector<TaskArtifact> tasks) {
  std::vector<SuccessMatrix> matrices;
  matrices.reserve(tasks.size());
  for (const auto& t : tasks) matrices.push_back(t.p_success);
  HierarchyArtifact out;
  out.global_p = global_success(matrices);
  out.tasks = std::move(tasks);
  out.config = config;
  out.hyperparams = hp;
  out.options = options;
  out.seed = hp.seed;
  return out;
}

void require_tasks(std::span<const TaskSpec> tasks) {
  if (tasks.empty()) throw DomainError("at least one task is required");
}

}  // namespace

HierarchyArtifact train_all_serial(const GridConfig& config, std::span<const TaskSpec> tasks,
                                   const Hyperparams& hp, const TrainOptions& options) {
  require_tasks(tasks);
  std::vector<TaskArtifact> trained;
  for (const TaskSpec& task : tasks) trained.push_back(train_task(task, config, hp, options));
  return assemble(config, hp, options, std::move(trained));
}

HierarchyArtifact train_all(const GridConfig& config, std::span<const TaskSpec> tasks,
                            const Hyperparams& hp, const TrainOptions& options) {
  require_tasks(tasks);
  const auto count = static_cast<std::int64_t>(tasks.size());
  std::vector<std::optional<TaskArtifact>> slots(tasks.size());
  std::vector<std::exception_ptr> errors(tasks.size());

#pragma omp parallel for schedule(dynamic, 1)
  for (std::int64_t i = 0; i < count; ++i) {
    try {
      slots[i].emplace(train_task(tasks[i], config, hp, options));
    } catch (...) {
      errors[i] = std::current_exception();
    }
  }

  std::vector<TaskArtifact> trained;
  for (std::size_t i = 0; i < slots.size(); ++i) {
    if (errors[i]) std::rethrow_exception(errors[i]);
    trained.push_back(std::move(*slots[i]));
  }
  return assemble(config, hp, options, std::move(trained));
}

SuccessMatrix global_success(std::span<const SuccessMatrix> per_task) {
  if (per_task.empty()) throw DomainError("global success needs at least one matrix");
  SuccessMatrix mean(per_task.front().num_states());
  for (const auto& m : per_task) {
    if (!m.same_shape(mean)) throw DomainError("success matrices differ in shape");
    auto out = mean.flat();
    auto in = m.flat();
    for (std::size_t i = 0; i < out.size(); ++i) out[i] += in[i];
  }
  for (double& x : mean.flat()) x /= static_cast<double>(per_task.size());
  return mean;
}

Rollout rollout_chain(const HierarchyArtifact& artifact, std::uint64_t seed, int max_total_steps) {
  Rollout r;
  if (artifact.tasks.empty()) throw DomainError("artifact has no tasks");
  Rng rng(seed);
  const GridConfig& config = artifact.config;
  std::size_t k = 0;
  StateId s = artifact.tasks.front().task.start_state;
  r.final_state = s;
  r.terminal = Terminal::Truncated;

  while (static_cast<int>(r.steps.size()) < max_total_steps) {
    const TaskArtifact& current = artifact.tasks[k];
    const Action a = select_action(q_values(current.backend, s), valid_actions(s, config), 0.0, rng);
    const StepOutcome out = step(s, a, current.task, config);
    r.steps.push_back({current.task.id, s, a, out.reward});
    r.total_reward += out.reward;
    s = out.next_state;
    r.final_state = s;
    if (out.terminal == Terminal::Failure) {
      r.terminal = Terminal::Failure;
      break;
    }
    if (out.terminal == Terminal::Goal) {
      if (k + 1 == artifact.tasks.size()) {
        r.terminal = Terminal::Goal;
        break;
      }
      ++k;
    }
  }
  return r;
}

std::vector<int> step_distances(const TaskSpec& task, const GridConfig& config) {
  std::vector<int> dist(config.num_states(), -1);
  std::deque<StateId> frontier{task.start_state};
  dist[task.start_state] = 0;
  while (!frontier.empty()) {
    const StateId s = frontier.front();
    frontier.pop_front();
    if (is_terminal(s, task, config)) continue;
    for (Action a : valid_actions(s, config).to_vector()) {
      const StateId t = neighbor(s, a, config);
      if (dist[t] < 0) {
        dist[t] = dist[s] + 1;
        frontier.push_back(t);
      }
    }
  }
  return dist;
}

std::vector<ForcedPair> forced_pairs(const TaskSpec& task, const GridConfig& config) {
  const auto dist = step_distances(task, config);
  std::vector<ForcedPair> out;
  for (StateId s = 0; s < config.num_states(); ++s) {
    if (is_terminal(s, task, config)) continue;
    for (Action a : valid_actions(s, config).to_vector()) {
      const Terminal event = entry_event(neighbor(s, a, config), task, config);
      if (event == Terminal::None) continue;
      const bool reachable = dist[s] >= 0 && dist[s] < task.max_steps;
      out.push_back({s, a, event == Terminal::Goal ? 1.0 : 0.0, reachable});
    }
  }
  return out;
}

}  // namespace hxrl
