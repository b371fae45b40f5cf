#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "jamlab/oracle.hpp"

namespace jamlab {

struct BoundInputs {
  std::int64_t horizon_or_round = 2;
  HolderParams holder;
  int n_mod = 3;
  int m = 1;
  double epsilon = 0.1;
  double delta_min_lower = 0.0;
};

// Shape of the cumulative-regret guarantee with a unit leading constant:
// n_mod * t^((alpha+2)/(2(alpha+1))) * (ln t)^(alpha/(2(alpha+1))).
double regret_curve(const BoundInputs& inputs, std::int64_t t);

// One-step confidence radius for a round of length T:
// 2 * 2^((3a+2)/(2(1+a))) * L^(1/(1+a)) * (ln T / T)^(a/(2(1+a))).
double one_step_delta(std::int64_t round_t, const HolderParams& holder);

// Estimate-based variant: one_step_delta scaled by 2^((2a+2)/(2(1+a))).
double estimate_delta(std::int64_t round_t, const HolderParams& holder);

// Probability mass allowed outside the one-step radius at step t.
double one_step_failure_probability(std::int64_t t, int n_mod, int m);

// Per-scheme cumulative-confidence bound:
// ((8 / (3 eps)) * (T / ln T)^(4/(1+a)))^(1/3).
double cumulative_confidence(std::int64_t round_t, const HolderParams& holder, double epsilon);

// Expected transmissions so that `packets_needed` packets are jammed.
std::int64_t plan_budget(double per_achieved, std::int64_t packets_needed);

struct SuboptimalityAudit {
  std::vector<double> gaps;                 // oracle_best - oracle_mean per arm
  std::vector<std::size_t> above_threshold; // arms whose gap exceeds the threshold
  std::int64_t undersampled_choices = 0;    // |U(T)|: threshold-exceeding arm chosen
                                            // while its pull count was still below
                                            // 8 ln T / gap^2
  double expectation_bound = 0.0;           // 8 sum(ln T / gap^2) + (1 + pi^2/3)|U_>|
  std::int64_t exceed_events = 0;           // steps outside U(T) with gap > delta
  double exceed_probability_budget = 0.0;   // sum over those steps of 2(N+M^2) t^-4
  std::int64_t steps = 0;
};

// Audits one round's choice sequence against per-arm oracle means. `delta`
// is the one-step radius used for the exceedance count; `n_mod` and `m`
// size the failure-probability budget.
SuboptimalityAudit suboptimality_audit(std::span<const std::size_t> chosen,
                                       std::span<const double> oracle_means,
                                       double delta_threshold, double delta, int n_mod,
                                       int m);

}  // namespace jamlab
