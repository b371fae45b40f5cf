#pragma once

#include <cstdint>
#include <vector>

#include "jamlab/bandit.hpp"
#include "jamlab/env.hpp"
#include "jamlab/grid.hpp"

namespace jamlab {

enum class InnerPolicyKind { Ucb1, UcbImproved };

struct TraceRow {
  std::int64_t t = 0;  // 1-based global step
  JammerAction action;
  double reward = 0.0;
  double per_estimate = 0.0;
  double ser_estimate = 0.0;
  double oracle_best = 0.0;        // best expected reward over the fine oracle grid
  double cumulative_regret = 0.0;  // sum of oracle_best - oracle mean of the chosen arm
};

struct RoundRecord {
  std::int64_t start_t = 1;
  std::int64_t length = 0;
  int m = 1;
  std::size_t arm_count = 0;
  std::vector<std::int64_t> pulls;  // per grid arm, this round
};

struct RunTrace {
  std::vector<TraceRow> rows;
  std::vector<RoundRecord> rounds;

  // Last round long enough to have initialized every arm (the trailing
  // 1-step stub of a power-of-two horizon is skipped).
  const RoundRecord* terminal_round() const;
};

struct MetaOptions {
  int fixed_m = 0;          // > 0 pins the discretization instead of the per-round formula
  int oracle_grid_m = 100;  // fine-grid resolution used for the regret benchmark
};

// Discretization used for a round of the given nominal length.
int round_resolution(std::int64_t nominal, const HolderParams& holder, InnerPolicyKind inner,
                     const MetaOptions& options);

// Doubling-round mixed-bandit run: each round recomputes the discretization,
// rebuilds the grid and restarts the inner policy from scratch.
RunTrace jb_run(Environment& env, std::int64_t horizon, const HolderParams& holder,
                InnerPolicyKind inner, const ActionSpace& space, std::uint64_t seed,
                const MetaOptions& options = {});

// Sliding-window variant for drifting victims: rounds are split into frames
// of window_w steps with overlapping passive/active halves; statistics reset
// every frame and warm up during the passive half.
RunTrace jb_drifting_run(Environment& env, std::int64_t horizon, const HolderParams& holder,
                         std::int64_t window_w, const ActionSpace& space, std::uint64_t seed,
                         const MetaOptions& options = {});

// Baselines.
RunTrace epsilon_greedy_run(Environment& env, std::int64_t horizon, int m, double epsilon0,
                            const ActionSpace& space, std::uint64_t seed,
                            const MetaOptions& options = {});
RunTrace fixed_action_run(Environment& env, std::int64_t horizon, const JammerAction& action,
                          const ActionSpace& space, std::uint64_t seed,
                          const MetaOptions& options = {});

// Slot structure of the drifting window. Frame 0 treats both halves as
// active; the passive (warm-up) half of frame w overlaps the active half of
// frame w-1, so every step after the first half-window feeds two frames.
struct DriftSlot {
  std::int64_t acting_frame = 0;
  std::int64_t warming_frame = -1;  // -1 before any frame starts warming
};
DriftSlot drift_slot(std::int64_t tau_in_round, std::int64_t window_w);

}  // namespace jamlab
