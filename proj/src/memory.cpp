#include "hxrl/memory.hpp"

#include <string>

namespace hxrl {

void record_transition(EpisodeLog& log, CountMatrix& t_total, StateId s, Action a) {
  log.transitions.emplace_back(s, a);
  ++t_total.at(s, a);
}

void commit_episode(EpisodeLog& log, CountMatrix& t_success, bool reached_goal) {
  if (reached_goal)
    for (const auto& [s, a] : log.transitions) ++t_success.at(s, a);
  log.clear();
}

SuccessMatrix success_probabilities(const CountMatrix& t_success, const CountMatrix& t_total) {
  if (!t_success.same_shape(t_total)) throw DomainError("count matrices differ in shape");
  SuccessMatrix p(t_total.num_states());
  const auto succ = t_success.flat();
  const auto total = t_total.flat();
  auto out = p.flat();
  for (std::size_t i = 0; i < total.size(); ++i) {
    if (succ[i] > total[i])
      throw CorruptedState("T_s exceeds T_t at state " + std::to_string(i / kNumActions) + ", action " +
                           std::string(action_name(action_from_index(static_cast<int>(i % kNumActions)))));
    out[i] = total[i] == 0 ? 0.0 : static_cast<double>(succ[i]) / static_cast<double>(total[i]);
  }
  return p;
}

}  // namespace hxrl
