#pragma once

// High-level task decomposition:every task is trained independently with its own
// backend and counters; the per-task success matrices are averaged into a
// global matrix.

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "hxrl/gridworld.hpp"
#include "hxrl/memory.hpp"
#include "hxrl/qfunction.hpp"

namespace hxrl {

// Escape the corner (0 -> 31), collect the shield (31 -> 93), reach the
// wormhole (93 -> 7).
std::vector<TaskSpec> default_tasks();

struct TrainOptions {
  BackendKind backend = BackendKind::Tabular;
  int hidden_size = kDefaultHiddenSize;

  friend bool operator==(const TrainOptions&, const TrainOptions&) = default;
};

struct TaskArtifact {
  TaskSpec task;
  QFunction backend;
  CountMatrix t_total;
  CountMatrix t_success;
  SuccessMatrix p_success;
  std::uint64_t episodes_succeeded = 0;
};

struct HierarchyArtifact {
  std::vector<TaskArtifact> tasks;
  SuccessMatrix global_p;
  GridConfig config;
  Hyperparams hyperparams;
  TrainOptions options;
  std::uint64_t seed = 0;
};

// Seed of the stream a task trains with; depends on the task id only, so
// reordering tasks leaves every task's result unchanged.
std::uint64_t task_seed(std::uint64_t run_seed, const TaskSpec& task);

// Throws DomainError when task states fall outside the grid or the goal is a
// failure state.
void validate_task(const TaskSpec& task, const GridConfig& config);

// Warnings for tasks whose start is not the previous task's goal.
std::vector<std::string> check_task_chain(std::span<const TaskSpec> tasks);

TaskArtifact train_task(const TaskSpec& task, const GridConfig& config, const Hyperparams& hp,
                        const TrainOptions& options = {});

// Trains each task in order on the calling thread.
HierarchyArtifact train_all_serial(const GridConfig& config, std::span<const TaskSpec> tasks,
                                   const Hyperparams& hp, const TrainOptions& options = {});

// Same result as train_all_serial, tasks trained concurrently with OpenMP.
HierarchyArtifact train_all(const GridConfig& config, std::span<const TaskSpec> tasks,
                            const Hyperparams& hp, const TrainOptions& options = {});

// Elementwise arithmetic mean. Throws DomainError on an empty list or shape
// mismatch.
SuccessMatrix global_success(std::span<const SuccessMatrix> per_task);

struct RolloutStep {
  int task_id = 0;
  StateId state = 0;
  Action action = Action::Up;
  double reward = 0.0;
};

struct Rollout {
  std::vector<RolloutStep> steps;
  Terminal terminal = Terminal::Truncated;
  StateId final_state = 0;
  double total_reward = 0.0;
};

// Greedy execution of the frozen per-task policies, switching task at each
// sub-goal. Ends on failure, the last task's goal, or max_total_steps.
Rollout rollout_chain(const HierarchyArtifact& artifact, std::uint64_t seed, int max_total_steps);

// A (state, action) pair whose success probability is fixed by topology:
// 1 if the step enters the task goal, 0 if it enters a failure terminal.
struct ForcedPair {
  StateId state = 0;
  Action action = Action::Up;
  double expected = 0.0;
  // Whether the pair can be taken at all from the task start within the step cap.
  bool reachable = false;
};

std::vector<ForcedPair> forced_pairs(const TaskSpec& task, const GridConfig& config);

// Minimum number of steps from the task start to each state without passing
// through a terminal; -1 when unreachable.
std::vector<int> step_distances(const TaskSpec& task, const GridConfig& config);

}  // namespace hxrl
