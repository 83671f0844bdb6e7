#pragma once

// Exact reference computations on the gridworld Markov chain, used to check
// the sampled quantities produced by training.

#include <optional>
#include <vector>

#include "hxrl/gridworld.hpp"
#include "hxrl/matrix.hpp"
#include "hxrl/memory.hpp"
#include "hxrl/qfunction.hpp"

namespace hxrl {

// Row s is a distribution over valid_actions(s); invalid entries are zero.
using FixedPolicy = StateActionMatrix<double>;

FixedPolicy uniform_policy(const GridConfig& config);
// Deterministic policy picking greedy_action of the backend in every state.
FixedPolicy greedy_policy(const QFunction& q, const GridConfig& config);

// Throws DomainError on negative entries, mass on invalid actions, or rows
// not summing to one. Rows of terminal states are ignored.
void validate_policy(const FixedPolicy& policy, const TaskSpec& task, const GridConfig& config);

// u_k(s): probability of reaching the task goal from s within k steps.
// Returns u_0 .. u_horizon, each of length num_states.
std::vector<std::vector<double>> reach_probabilities(const FixedPolicy& policy, const TaskSpec& task,
                                                     const GridConfig& config, int horizon);

// q(s, a) = u_{horizon-1}(next(s, a)); all zeros for horizon 0 and for
// terminal or invalid pairs.
SuccessMatrix success_prob_exact(const FixedPolicy& policy, const TaskSpec& task,
                                 const GridConfig& config, int horizon);

// Exact limit of T_s / T_t when counts are collected under `policy` from
// task.start_state with the task's step cap. Each occurrence at step t is
// weighted by the probability of being there at t, and succeeds with
// u_{max_steps-1-t}(next).
struct MemoryLimit {
  SuccessMatrix success;
  // Expected number of occurrences of (s, a) per episode.
  StateActionMatrix<double> expected_visits;
};

MemoryLimit memory_success_limit(const FixedPolicy& policy, const TaskSpec& task,
                                 const GridConfig& config);

struct ValueIterationResult {
  std::vector<double> values;
  StateActionMatrix<double> q;
  // Greedy action per state; empty for terminal states.
  std::vector<std::optional<Action>> policy;
  int sweeps = 0;
  double residual = 0.0;
};

// Bellman optimality backups until the max change is below tolerance.
// Terminal states have value 0; the reward for entering them is on the edge.
ValueIterationResult value_iteration(const GridConfig& config, const TaskSpec& task, double gamma,
                                     double tolerance = 1e-10);

}  // namespace hxrl
