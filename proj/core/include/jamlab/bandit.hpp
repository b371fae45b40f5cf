#pragma once

#include <cstdint>
#include <memory>
#include <span>
#include <vector>

#include "jamlab/rng.hpp"

namespace jamlab {

struct ArmStats {
  std::int64_t pulls = 0;
  double mean_reward = 0.0;
  double cumulative_reward = 0.0;
};

// Index maximization with play-each-arm-once initialization. t is the step
// count since the policy was (re)initialized, 1-based. Ties break toward
// the lowest arm id.
std::size_t ucb1_select(std::span<const ArmStats> stats, std::int64_t t);

// Running-average update. Rewards must lie in [0, 1]; anything else means
// an unnormalized cost slipped through upstream.
void ucb1_update(ArmStats& stats, double reward);

// Exploration probability epsilon0^(t/10); exploit = argmax mean (ties low).
std::size_t epsilon_greedy_select(std::span<const ArmStats> stats, std::int64_t t,
                                  double epsilon0, Rng& rng);

// Common interface for the per-round policies driven by the outer loops.
class ArmPolicy {
 public:
  virtual ~ArmPolicy() = default;
  virtual std::size_t select(Rng& rng) = 0;
  virtual void update(std::size_t arm, double reward) = 0;
  virtual std::span<const ArmStats> stats() const = 0;
};

class Ucb1Policy final : public ArmPolicy {
 public:
  explicit Ucb1Policy(std::size_t n_arms);
  std::size_t select(Rng& rng) override;
  void update(std::size_t arm, double reward) override;
  std::span<const ArmStats> stats() const override { return stats_; }
  std::int64_t step_count() const { return t_; }

 private:
  std::vector<ArmStats> stats_;
  std::int64_t t_ = 0;
};

class EpsilonGreedyPolicy final : public ArmPolicy {
 public:
  EpsilonGreedyPolicy(std::size_t n_arms, double epsilon0);
  std::size_t select(Rng& rng) override;
  void update(std::size_t arm, double reward) override;
  std::span<const ArmStats> stats() const override { return stats_; }

 private:
  std::vector<ArmStats> stats_;
  double epsilon0_;
  std::int64_t t_ = 0;
};

// Bookkeeping of the successive-elimination rounds.
struct EliminationState {
  int round_m = 0;
  double delta_tilde = 1.0;
  std::vector<std::size_t> active;
  std::int64_t per_round_quota = 0;
  bool quota_clamped = false;  // set when horizon * delta_tilde^2 <= 1
};

// Successive arm elimination with per-round confidence quotas. Within a
// round every active arm is brought up to the round quota (round-robin);
// at the round end arms whose upper confidence bound falls below the best
// lower bound are deleted and the gap guess is halved. A sole survivor is
// played until the horizon.
class UcbImprovedPolicy final : public ArmPolicy {
 public:
  UcbImprovedPolicy(std::size_t n_arms, std::int64_t horizon);
  std::size_t select(Rng& rng) override;
  void update(std::size_t arm, double reward) override;
  std::span<const ArmStats> stats() const override { return stats_; }
  const EliminationState& state() const { return state_; }

 private:
  void finish_round();
  std::int64_t quota() const;
  std::size_t best_active_mean() const;

  std::vector<ArmStats> stats_;
  EliminationState state_;
  std::int64_t horizon_;
  int max_round_;
  bool rounds_done_ = false;
};

}  // namespace jamlab
