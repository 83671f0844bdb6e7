#pragma once

// Monte-Carlo count collection under a frozen policy. Episodes are split into
// fixed blocks with one RNG stream per block, so the OpenMP kernel and the
// serial reference produce identical counts for the same seed.

#include <cstdint>

#include "hxrl/memory.hpp"
#include "hxrl/oracle.hpp"

namespace hxrl {

inline constexpr std::uint64_t kEpisodesPerBlock = 4096;

struct CollectResult {
  CountMatrix t_total;
  CountMatrix t_success;
  std::uint64_t episodes_succeeded = 0;
  std::uint64_t steps = 0;

  SuccessMatrix probabilities() const { return success_probabilities(t_success, t_total); }
};

// Samples an action from a policy row.
Action sample_action(const FixedPolicy& policy, StateId s, Rng& rng);

CollectResult collect_counts_serial(const FixedPolicy& policy, const TaskSpec& task,
                                    const GridConfig& config, std::uint64_t episodes,
                                    std::uint64_t seed);

CollectResult collect_counts(const FixedPolicy& policy, const TaskSpec& task,
                             const GridConfig& config, std::uint64_t episodes, std::uint64_t seed);

}  // namespace hxrl
