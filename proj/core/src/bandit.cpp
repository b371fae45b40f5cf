#include "jamlab/bandit.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace jamlab {

std::size_t ucb1_select(std::span<const ArmStats> stats, std::int64_t t) {
  if (stats.empty()) throw std::invalid_argument("ucb1_select: empty arm set");
  for (std::size_t i = 0; i < stats.size(); ++i)
    if (stats[i].pulls == 0) return i;
  const double logt = std::log(static_cast<double>(t < 1 ? 1 : t));
  std::size_t best = 0;
  double best_index = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < stats.size(); ++i) {
    const double index =
        stats[i].mean_reward + std::sqrt(2.0 * logt / static_cast<double>(stats[i].pulls));
    if (index > best_index) {
      best_index = index;
      best = i;
    }
  }
  return best;
}

void ucb1_update(ArmStats& stats, double reward) {
  if (reward < 0.0 || reward > 1.0)
    throw std::invalid_argument("ucb1_update: reward outside [0, 1]");
  stats.pulls += 1;
  stats.cumulative_reward += reward;
  stats.mean_reward = stats.cumulative_reward / static_cast<double>(stats.pulls);
}

std::size_t epsilon_greedy_select(std::span<const ArmStats> stats, std::int64_t t,
                                  double epsilon0, Rng& rng) {
  if (stats.empty()) throw std::invalid_argument("epsilon_greedy_select: empty arm set");
  if (!(epsilon0 > 0.0) || epsilon0 >= 1.0)
    throw std::invalid_argument("epsilon_greedy_select: epsilon0 must lie in (0, 1)");
  const double eps = std::pow(epsilon0, static_cast<double>(t) / 10.0);
  if (rng.uniform() < eps) return rng.uniform_index(stats.size());
  std::size_t best = 0;
  for (std::size_t i = 1; i < stats.size(); ++i)
    if (stats[i].mean_reward > stats[best].mean_reward) best = i;
  return best;
}

Ucb1Policy::Ucb1Policy(std::size_t n_arms) : stats_(n_arms) {
  if (n_arms == 0) throw std::invalid_argument("Ucb1Policy: empty arm set");
}

std::size_t Ucb1Policy::select(Rng&) { return ucb1_select(stats_, t_ + 1); }

void Ucb1Policy::update(std::size_t arm, double reward) {
  ucb1_update(stats_.at(arm), reward);
  ++t_;
}

EpsilonGreedyPolicy::EpsilonGreedyPolicy(std::size_t n_arms, double epsilon0)
    : stats_(n_arms), epsilon0_(epsilon0) {
  if (n_arms == 0) throw std::invalid_argument("EpsilonGreedyPolicy: empty arm set");
  if (!(epsilon0 > 0.0) || epsilon0 >= 1.0)
    throw std::invalid_argument("EpsilonGreedyPolicy: epsilon0 must lie in (0, 1)");
}

std::size_t EpsilonGreedyPolicy::select(Rng& rng) {
  return epsilon_greedy_select(stats_, t_, epsilon0_, rng);
}

void EpsilonGreedyPolicy::update(std::size_t arm, double reward) {
  ucb1_update(stats_.at(arm), reward);
  ++t_;
}

UcbImprovedPolicy::UcbImprovedPolicy(std::size_t n_arms, std::int64_t horizon)
    : stats_(n_arms), horizon_(horizon) {
  if (n_arms == 0) throw std::invalid_argument("UcbImprovedPolicy: empty arm set");
  if (horizon < 1) throw std::invalid_argument("UcbImprovedPolicy: horizon must be >= 1");
  state_.active.resize(n_arms);
  for (std::size_t i = 0; i < n_arms; ++i) state_.active[i] = i;
  state_.delta_tilde = 1.0;
  const double limit = 0.5 * std::log2(static_cast<double>(horizon) / std::exp(1.0));
  max_round_ = limit < 0.0 ? 0 : static_cast<int>(std::floor(limit));
  state_.per_round_quota = quota();
}

std::int64_t UcbImprovedPolicy::quota() const {
  const double x = static_cast<double>(horizon_) * state_.delta_tilde * state_.delta_tilde;
  if (x <= 1.0) return 1;  // log would be non-positive; clamp (flagged below)
  return static_cast<std::int64_t>(
      std::ceil(2.0 * std::log(x) / (state_.delta_tilde * state_.delta_tilde)));
}

std::size_t UcbImprovedPolicy::best_active_mean() const {
  std::size_t best = state_.active.front();
  for (std::size_t a : state_.active)
    if (stats_[a].mean_reward > stats_[best].mean_reward) best = a;
  return best;
}

std::size_t UcbImprovedPolicy::select(Rng&) {
  if (state_.active.size() == 1 || rounds_done_) return best_active_mean();
  for (;;) {
    for (std::size_t a : state_.active)
      if (stats_[a].pulls < state_.per_round_quota) return a;
    finish_round();
    if (state_.active.size() == 1 || rounds_done_) return best_active_mean();
  }
}

void UcbImprovedPolicy::finish_round() {
  const double x = static_cast<double>(horizon_) * state_.delta_tilde * state_.delta_tilde;
  state_.quota_clamped = state_.quota_clamped || x <= 1.0;
  const double radius =
      std::sqrt(std::max(std::log(std::max(x, 1.0)), 0.0) /
                (2.0 * static_cast<double>(state_.per_round_quota)));
  double best_lower = -std::numeric_limits<double>::infinity();
  for (std::size_t a : state_.active)
    best_lower = std::max(best_lower, stats_[a].mean_reward - radius);
  std::vector<std::size_t> kept;
  kept.reserve(state_.active.size());
  for (std::size_t a : state_.active)
    if (stats_[a].mean_reward + radius >= best_lower) kept.push_back(a);
  if (!kept.empty()) state_.active = std::move(kept);
  state_.delta_tilde *= 0.5;
  state_.round_m += 1;
  if (state_.round_m > max_round_) rounds_done_ = true;
  state_.per_round_quota = quota();
}

void UcbImprovedPolicy::update(std::size_t arm, double reward) {
  ucb1_update(stats_.at(arm), reward);
}

}  // namespace jamlab
