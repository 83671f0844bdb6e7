#include "hxrl/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "hxrl/errors.hpp"

namespace hxrl {

FixedPolicy uniform_policy(const GridConfig& config) {
  FixedPolicy policy(config.num_states());
  for (StateId s = 0; s < config.num_states(); ++s) {
    const ActionSet valid = valid_actions(s, config);
    for (Action a : valid.to_vector()) policy.at(s, a) = 1.0 / valid.size();
  }
  return policy;
}

FixedPolicy greedy_policy(const QFunction& q, const GridConfig& config) {
  FixedPolicy policy(config.num_states());
  for (StateId s = 0; s < config.num_states(); ++s)
    policy.at(s, greedy_action(q_values(q, s), valid_actions(s, config))) = 1.0;
  return policy;
}

void validate_policy(const FixedPolicy& policy, const TaskSpec& task, const GridConfig& config) {
  if (policy.num_states() != config.num_states()) throw DomainError("policy shape does not match grid");
  for (StateId s = 0; s < config.num_states(); ++s) {
    if (is_terminal(s, task, config)) continue;
    const ActionSet valid = valid_actions(s, config);
    double sum = 0.0;
    for (Action a : kAllActions) {
      const double p = policy.at(s, a);
      if (!(p >= 0.0) || !std::isfinite(p))
        throw DomainError("policy entry at state " + std::to_string(s) + " is not a probability");
      if (p > 0.0 && !valid.contains(a))
        throw DomainError("policy puts mass on a masked action at state " + std::to_string(s));
      sum += p;
    }
    if (std::abs(sum - 1.0) > 1e-9)
      throw DomainError("policy row " + std::to_string(s) + " does not sum to one");
  }
}

std::vector<std::vector<double>> reach_probabilities(const FixedPolicy& policy, const TaskSpec& task,
                                                     const GridConfig& config, int horizon) {
  validate_policy(policy, task, config);
  if (horizon < 0) throw DomainError("horizon must be non-negative");
  const int n = config.num_states();
  std::vector<std::vector<double>> u(horizon + 1, std::vector<double>(n, 0.0));
  for (int k = 0; k <= horizon; ++k) u[k][task.goal_state] = 1.0;
  for (int k = 1; k <= horizon; ++k) {
    for (StateId s = 0; s < n; ++s) {
      if (is_terminal(s, task, config)) continue;
      double sum = 0.0;
      for (Action a : valid_actions(s, config).to_vector()) {
        const double p = policy.at(s, a);
        if (p > 0.0) sum += p * u[k - 1][neighbor(s, a, config)];
      }
      u[k][s] = sum;
    }
  }
  return u;
}

SuccessMatrix success_prob_exact(const FixedPolicy& policy, const TaskSpec& task,
                                 const GridConfig& config, int horizon) {
  SuccessMatrix q(config.num_states());
  const auto u = reach_probabilities(policy, task, config, horizon);
  if (horizon == 0) return q;
  const auto& remaining = u[horizon - 1];
  for (StateId s = 0; s < config.num_states(); ++s) {
    if (is_terminal(s, task, config)) continue;
    for (Action a : valid_actions(s, config).to_vector()) q.at(s, a) = remaining[neighbor(s, a, config)];
  }
  return q;
}

MemoryLimit memory_success_limit(const FixedPolicy& policy, const TaskSpec& task,
                                 const GridConfig& config) {
  const int n = config.num_states();
  const int horizon = task.max_steps;
  const auto u = reach_probabilities(policy, task, config, horizon);

  StateActionMatrix<double> weighted_success(n);
  MemoryLimit out{SuccessMatrix(n), StateActionMatrix<double>(n)};
  // Distribution over non-terminated positions at step t.
  std::vector<double> occupancy(n, 0.0), next(n, 0.0);
  occupancy[task.start_state] = 1.0;
  for (int t = 0; t < horizon; ++t) {
    std::fill(next.begin(), next.end(), 0.0);
    for (StateId s = 0; s < n; ++s) {
      if (occupancy[s] == 0.0 || is_terminal(s, task, config)) continue;
      for (Action a : valid_actions(s, config).to_vector()) {
        const double mass = occupancy[s] * policy.at(s, a);
        if (mass == 0.0) continue;
        const StateId to = neighbor(s, a, config);
        out.expected_visits.at(s, a) += mass;
        weighted_success.at(s, a) += mass * u[horizon - 1 - t][to];
        next[to] += mass;
      }
    }
    std::swap(occupancy, next);
  }
  for (StateId s = 0; s < n; ++s)
    for (Action a : kAllActions) {
      const double visits = out.expected_visits.at(s, a);
      out.success.at(s, a) = visits > 0.0 ? weighted_success.at(s, a) / visits : 0.0;
    }
  return out;
}

ValueIterationResult value_iteration(const GridConfig& config, const TaskSpec& task, double gamma,
                                     double tolerance) {
  if (!(gamma >= 0.0 && gamma < 1.0)) throw DomainError("value iteration needs gamma in [0, 1)");
  if (!(tolerance > 0.0)) throw DomainError("tolerance must be positive");
  const int n = config.num_states();
  ValueIterationResult r{std::vector<double>(n, 0.0), StateActionMatrix<double>(n),
                         std::vector<std::optional<Action>>(n), 0, 0.0};

  auto backup = [&](StateId s, Action a, const std::vector<double>& v) {
    const StepOutcome o = step(s, a, task, config);
    return o.reward + (o.terminal == Terminal::None ? gamma * v[o.next_state] : 0.0);
  };

  std::vector<double> next(n, 0.0);
  do {
    r.residual = 0.0;
    for (StateId s = 0; s < n; ++s) {
      if (is_terminal(s, task, config)) continue;
      double best = -std::numeric_limits<double>::infinity();
      for (Action a : valid_actions(s, config).to_vector()) best = std::max(best, backup(s, a, r.values));
      next[s] = best;
      r.residual = std::max(r.residual, std::abs(best - r.values[s]));
    }
    std::swap(r.values, next);
    ++r.sweeps;
  } while (r.residual >= tolerance);

  for (StateId s = 0; s < n; ++s) {
    if (is_terminal(s, task, config)) continue;
    const ActionSet valid = valid_actions(s, config);
    QValues row{};
    for (Action a : valid.to_vector()) row[index(a)] = r.q.at(s, a) = backup(s, a, r.values);
    r.policy[s] = greedy_action(row, valid);
  }
  return r;
}

}  // namespace hxrl
