#include "jamlab/meta.hpp"

#include <cmath>
#include <limits>
#include <memory>
#include <stdexcept>
#include <unordered_map>

namespace jamlab {

namespace {

// Caches the fine-grid oracle optimum per environment state.
class OracleTracker {
 public:
  OracleTracker(Environment& env, const ActionSpace& space, int oracle_m)
      : env_(env), fine_(ActionGrid::build(space, oracle_m)) {}

  double best_now() {
    const std::uint64_t key = env_.state_key();
    if (auto it = cache_.find(key); it != cache_.end()) return it->second;
    double best = -std::numeric_limits<double>::infinity();
    for (const JammerAction& a : fine_.arms) best = std::max(best, env_.expected_reward(a));
    cache_[key] = best;
    return best;
  }

 private:
  Environment& env_;
  ActionGrid fine_;
  std::unordered_map<std::uint64_t, double> cache_;
};

class Recorder {
 public:
  Recorder(Environment& env, const ActionSpace& space, const MetaOptions& opts)
      : env_(env), tracker_(env, space, opts.oracle_grid_m) {}

  void record(RunTrace& trace, std::int64_t t, const JammerAction& action,
              const Feedback& fb) {
    const double best = tracker_.best_now();
    cum_regret_ += best - env_.expected_reward(action);
    trace.rows.push_back(TraceRow{t, action, fb.reward, fb.per_estimate, fb.ser_estimate,
                                  best, cum_regret_});
  }

 private:
  Environment& env_;
  OracleTracker tracker_;
  double cum_regret_ = 0.0;
};

}  // namespace

int round_resolution(std::int64_t nominal, const HolderParams& holder, InnerPolicyKind inner,
                     const MetaOptions& options) {
  if (options.fixed_m > 0) return options.fixed_m;
  if (inner == InnerPolicyKind::Ucb1) return compute_m(nominal, holder);
  if (nominal < 4) return 1;  // below the elimination formula's domain
  return compute_m_elimination(nominal, holder).m;
}

const RoundRecord* RunTrace::terminal_round() const {
  for (auto it = rounds.rbegin(); it != rounds.rend(); ++it)
    if (it->length >= static_cast<std::int64_t>(it->arm_count)) return &*it;
  return rounds.empty() ? nullptr : &rounds.back();
}

RunTrace jb_run(Environment& env, std::int64_t horizon, const HolderParams& holder,
                InnerPolicyKind inner, const ActionSpace& space, std::uint64_t seed,
                const MetaOptions& options) {
  if (horizon < 1) throw std::invalid_argument("jb_run: horizon must be >= 1");
  RunTrace trace;
  Recorder rec(env, space, options);
  StreamSeeder policy_seeds(hash_combine(seed, 0x70'11CEull));
  std::int64_t t_global = 0;
  for (const RoundSpan& round : round_schedule(horizon)) {
    const int m = round_resolution(round.nominal, holder, inner, options);
    const ActionGrid grid = ActionGrid::build(space, m);
    std::unique_ptr<ArmPolicy> policy;
    if (inner == InnerPolicyKind::Ucb1)
      policy = std::make_unique<Ucb1Policy>(grid.size());
    else
      policy = std::make_unique<UcbImprovedPolicy>(grid.size(), round.nominal);
    Rng prng = policy_seeds.stream(static_cast<std::uint64_t>(round.start));

    RoundRecord record;
    record.start_t = round.start;
    record.length = round.length;
    record.m = m;
    record.arm_count = grid.size();
    record.pulls.assign(grid.size(), 0);
    for (std::int64_t i = 0; i < round.length; ++i) {
      ++t_global;
      const std::size_t a = policy->select(prng);
      const Feedback fb = env.step(grid.arms[a]);
      policy->update(a, fb.reward);
      record.pulls[a] += 1;
      rec.record(trace, t_global, grid.arms[a], fb);
    }
    trace.rounds.push_back(std::move(record));
  }
  return trace;
}

DriftSlot drift_slot(std::int64_t tau_in_round, std::int64_t window_w) {
  if (window_w < 2 || window_w % 2 != 0)
    throw std::invalid_argument("drift_slot: window must be even and >= 2");
  const std::int64_t half = window_w / 2;
  DriftSlot slot;
  // Frame 0 owns [0, window) with both halves active; frame w >= 1 owns
  // [w*half, w*half + window), warming up in its first half (which overlaps
  // the acting frame's active half) and acting in its second.
  slot.acting_frame = tau_in_round < window_w ? 0 : tau_in_round / half - 1;
  slot.warming_frame = tau_in_round >= half ? tau_in_round / half : -1;
  return slot;
}

RunTrace jb_drifting_run(Environment& env, std::int64_t horizon, const HolderParams& holder,
                         std::int64_t window_w, const ActionSpace& space, std::uint64_t seed,
                         const MetaOptions& options) {
  if (horizon < 1) throw std::invalid_argument("jb_drifting_run: horizon must be >= 1");
  if (window_w < 2 || window_w % 2 != 0)
    throw std::invalid_argument("jb_drifting_run: window must be even and >= 2");
  (void)seed;
  RunTrace trace;
  Recorder rec(env, space, options);
  const std::int64_t half = window_w / 2;
  std::int64_t t_global = 0;
  for (const RoundSpan& round : round_schedule(horizon)) {
    const int m = round_resolution(round.nominal, holder, InnerPolicyKind::Ucb1, options);
    const ActionGrid grid = ActionGrid::build(space, m);
    std::vector<ArmStats> actor(grid.size()), warm(grid.size());
    std::int64_t actor_t = 0, warm_t = 0;
    std::int64_t next_switch = window_w;

    RoundRecord record;
    record.start_t = round.start;
    record.length = round.length;
    record.m = m;
    record.arm_count = grid.size();
    record.pulls.assign(grid.size(), 0);
    for (std::int64_t tau = 0; tau < round.length; ++tau) {
      if (tau == next_switch) {
        actor = warm;
        actor_t = warm_t;
        warm.assign(grid.size(), ArmStats{});
        warm_t = 0;
        next_switch += half;
      }
      ++t_global;
      const std::size_t a = ucb1_select(actor, actor_t + 1);
      const Feedback fb = env.step(grid.arms[a]);
      ucb1_update(actor[a], fb.reward);
      ++actor_t;
      if (tau >= half) {
        ucb1_update(warm[a], fb.reward);
        ++warm_t;
      }
      record.pulls[a] += 1;
      rec.record(trace, t_global, grid.arms[a], fb);
    }
    trace.rounds.push_back(std::move(record));
  }
  return trace;
}

RunTrace epsilon_greedy_run(Environment& env, std::int64_t horizon, int m, double epsilon0,
                            const ActionSpace& space, std::uint64_t seed,
                            const MetaOptions& options) {
  if (horizon < 1) throw std::invalid_argument("epsilon_greedy_run: horizon must be >= 1");
  RunTrace trace;
  Recorder rec(env, space, options);
  const ActionGrid grid = ActionGrid::build(space, m);
  EpsilonGreedyPolicy policy(grid.size(), epsilon0);
  Rng prng = StreamSeeder(hash_combine(seed, 0x70'11CEull)).stream(1);
  RoundRecord record;
  record.start_t = 1;
  record.length = horizon;
  record.m = m;
  record.arm_count = grid.size();
  record.pulls.assign(grid.size(), 0);
  for (std::int64_t t = 1; t <= horizon; ++t) {
    const std::size_t a = policy.select(prng);
    const Feedback fb = env.step(grid.arms[a]);
    policy.update(a, fb.reward);
    record.pulls[a] += 1;
    rec.record(trace, t, grid.arms[a], fb);
  }
  trace.rounds.push_back(std::move(record));
  return trace;
}

RunTrace fixed_action_run(Environment& env, std::int64_t horizon, const JammerAction& action,
                          const ActionSpace& space, std::uint64_t seed,
                          const MetaOptions& options) {
  if (horizon < 1) throw std::invalid_argument("fixed_action_run: horizon must be >= 1");
  (void)seed;
  RunTrace trace;
  Recorder rec(env, space, options);
  RoundRecord record;
  record.start_t = 1;
  record.length = horizon;
  record.m = 1;
  record.arm_count = 1;
  record.pulls.assign(1, 0);
  for (std::int64_t t = 1; t <= horizon; ++t) {
    const Feedback fb = env.step(action);
    record.pulls[0] += 1;
    rec.record(trace, t, action, fb);
  }
  trace.rounds.push_back(std::move(record));
  return trace;
}

}  // namespace jamlab
