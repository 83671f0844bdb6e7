#include "hxrl/collect.hpp"

#include <algorithm>
#include <vector>

#include <omp.h>

namespace hxrl {

Action sample_action(const FixedPolicy& policy, StateId s, Rng& rng) {
  const auto row = policy.row(s);
  const double u = rng.uniform01();
  double cumulative = 0.0;
  std::optional<Action> last;
  for (int k = 0; k < kNumActions; ++k) {
    if (row[k] <= 0.0) continue;
    cumulative += row[k];
    last = action_from_index(k);
    if (u < cumulative) return *last;
  }
  if (!last) throw DomainError("policy row has no mass at state " + std::to_string(s));
  return *last;  // rounding left u above the final cumulative sum
}

namespace {

std::uint64_t block_count(std::uint64_t episodes) {
  return (episodes + kEpisodesPerBlock - 1) / kEpisodesPerBlock;
}

// Runs block `b` of the episode range into `acc`.
void run_block(const FixedPolicy& policy, const TaskSpec& task, const GridConfig& config,
               std::uint64_t episodes, std::uint64_t seed, std::uint64_t b, CollectResult& acc,
               EpisodeLog& log) {
  Rng rng(derive_seed(seed, b));
  const std::uint64_t first = b * kEpisodesPerBlock;
  const std::uint64_t last = std::min(episodes, first + kEpisodesPerBlock);
  for (std::uint64_t e = first; e < last; ++e) {
    log.clear();
    StateId s = task.start_state;
    bool reached = false;
    for (int t = 0; t < task.max_steps; ++t) {
      const Action a = sample_action(policy, s, rng);
      const StepOutcome out = step(s, a, task, config);
      record_transition(log, acc.t_total, s, a);
      ++acc.steps;
      s = out.next_state;
      if (out.terminal != Terminal::None) {
        reached = out.terminal == Terminal::Goal;
        break;
      }
    }
    if (reached) ++acc.episodes_succeeded;
    commit_episode(log, acc.t_success, reached);
  }
}

CollectResult empty_result(const GridConfig& config) {
  return {CountMatrix(config.num_states()), CountMatrix(config.num_states()), 0, 0};
}

void merge_into(CollectResult& dst, const CollectResult& src) {
  auto add = [](CountMatrix& a, const CountMatrix& b) {
    auto fa = a.flat();
    auto fb = b.flat();
    for (std::size_t i = 0; i < fa.size(); ++i) fa[i] += fb[i];
  };
  add(dst.t_total, src.t_total);
  add(dst.t_success, src.t_success);
  dst.episodes_succeeded += src.episodes_succeeded;
  dst.steps += src.steps;
}

}  // namespace

CollectResult collect_counts_serial(const FixedPolicy& policy, const TaskSpec& task,
                                    const GridConfig& config, std::uint64_t episodes,
                                    std::uint64_t seed) {
  validate_policy(policy, task, config);
  CollectResult result = empty_result(config);
  EpisodeLog log;
  for (std::uint64_t b = 0; b < block_count(episodes); ++b)
    run_block(policy, task, config, episodes, seed, b, result, log);
  return result;
}

CollectResult collect_counts(const FixedPolicy& policy, const TaskSpec& task,
                             const GridConfig& config, std::uint64_t episodes, std::uint64_t seed) {
  validate_policy(policy, task, config);
  const auto blocks = static_cast<std::int64_t>(block_count(episodes));
  const int threads = std::max(1, std::min<int>(omp_get_max_threads(), static_cast<int>(blocks)));
  std::vector<CollectResult> partial(threads, empty_result(config));

#pragma omp parallel num_threads(threads)
  {
    const int tid = omp_get_thread_num();
    EpisodeLog log;
#pragma omp for schedule(dynamic, 1)
    for (std::int64_t b = 0; b < blocks; ++b)
      run_block(policy, task, config, episodes, seed, static_cast<std::uint64_t>(b), partial[tid], log);
  }

  // Integer sums: the merge order does not affect the result.
  CollectResult result = empty_result(config);
  for (const auto& p : partial) merge_into(result, p);
  return result;
}

}  // namespace hxrl
