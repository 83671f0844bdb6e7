#pragma once

// Episodic memory: the per-episode transition list plus global counters of
// total transitions (T_t) and transitions inside successful episodes (T_s).
// The success probability is their elementwise quotient.

#include <cstdint>
#include <utility>
#include <vector>

#include "hxrl/gridworld.hpp"
#include "hxrl/matrix.hpp"

namespace hxrl {

using CountMatrix = StateActionMatrix<std::uint64_t>;
using SuccessMatrix = StateActionMatrix<double>;

struct EpisodeLog {
  std::vector<std::pair<StateId, Action>> transitions;

  void clear() { transitions.clear(); }
  std::size_t size() const { return transitions.size(); }
};

// Appends (s, a) to the log and bumps t_total[s][a] by one.
void record_transition(EpisodeLog& log, CountMatrix& t_total, StateId s, Action a);

// On success every logged occurrence bumps t_success once; the log is cleared
// either way.
void commit_episode(EpisodeLog& log, CountMatrix& t_success, bool reached_goal);

// T_s / T_t with 0/0 -> 0. Throws CorruptedState if T_s > T_t anywhere and
// DomainError on a shape mismatch.
SuccessMatrix success_probabilities(const CountMatrix& t_success, const CountMatrix& t_total);

// Bundles the three pieces for a single training run.
class EpisodicMemory {
 public:
  explicit EpisodicMemory(int num_states) : t_total_(num_states), t_success_(num_states) {}

  void begin_episode() { log_.clear(); }
  void record(StateId s, Action a) { record_transition(log_, t_total_, s, a); }
  void end_episode(bool reached_goal) { commit_episode(log_, t_success_, reached_goal); }

  const EpisodeLog& log() const { return log_; }
  const CountMatrix& t_total() const { return t_total_; }
  const CountMatrix& t_success() const { return t_success_; }
  SuccessMatrix probabilities() const { return success_probabilities(t_success_, t_total_); }

 private:
  EpisodeLog log_;
  CountMatrix t_total_;
  CountMatrix t_success_;
};

}  // namespace hxrl
