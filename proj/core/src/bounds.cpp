#include "jamlab/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace jamlab {

double regret_curve(const BoundInputs& inputs, std::int64_t t) {
  if (t < 2) throw std::invalid_argument("regret_curve: t must be >= 2");
  const double a = inputs.holder.exponent_alpha;
  const double td = static_cast<double>(t);
  return static_cast<double>(inputs.n_mod) * std::pow(td, (a + 2.0) / (2.0 * (a + 1.0))) *
         std::pow(std::log(td), a / (2.0 * (a + 1.0)));
}

double one_step_delta(std::int64_t round_t, const HolderParams& holder) {
  if (round_t < 2) throw std::invalid_argument("one_step_delta: round length must be >= 2");
  const double a = holder.exponent_alpha;
  const double td = static_cast<double>(round_t);
  return 2.0 * std::pow(2.0, (3.0 * a + 2.0) / (2.0 * (1.0 + a))) *
         std::pow(holder.constant_l, 1.0 / (1.0 + a)) *
         std::pow(std::log(td) / td, a / (2.0 * (1.0 + a)));
}

double estimate_delta(std::int64_t round_t, const HolderParams& holder) {
  const double a = holder.exponent_alpha;
  return one_step_delta(round_t, holder) * std::pow(2.0, (2.0 * a + 2.0) / (2.0 * (1.0 + a)));
}

double one_step_failure_probability(std::int64_t t, int n_mod, int m) {
  if (t < 1) throw std::invalid_argument("one_step_failure_probability: t must be >= 1");
  const double td = static_cast<double>(t);
  return 2.0 * (static_cast<double>(n_mod) + static_cast<double>(m) * m) /
         (td * td * td * td);
}

double cumulative_confidence(std::int64_t round_t, const HolderParams& holder,
                             double epsilon) {
  if (round_t < 3) throw std::invalid_argument("cumulative_confidence: round length must be >= 3");
  if (!(epsilon > 0.0) || epsilon >= 1.0)
    throw std::invalid_argument("cumulative_confidence: epsilon must lie in (0, 1)");
  const double a = holder.exponent_alpha;
  const double td = static_cast<double>(round_t);
  return std::cbrt((8.0 / (3.0 * epsilon)) * std::pow(td / std::log(td), 4.0 / (1.0 + a)));
}

std::int64_t plan_budget(double per_achieved, std::int64_t packets_needed) {
  if (!(per_achieved > 0.0) || per_achieved > 1.0)
    throw std::invalid_argument("plan_budget: per_achieved must lie in (0, 1]");
  if (packets_needed < 1) throw std::invalid_argument("plan_budget: packets_needed must be >= 1");
  return static_cast<std::int64_t>(
      std::ceil(static_cast<double>(packets_needed) / per_achieved));
}

SuboptimalityAudit suboptimality_audit(std::span<const std::size_t> chosen,
                                       std::span<const double> oracle_means,
                                       double delta_threshold, double delta, int n_mod,
                                       int m) {
  if (oracle_means.empty()) throw std::invalid_argument("suboptimality_audit: no arms");
  SuboptimalityAudit audit;
  audit.steps = static_cast<std::int64_t>(chosen.size());
  const double best = *std::max_element(oracle_means.begin(), oracle_means.end());
  audit.gaps.resize(oracle_means.size());
  for (std::size_t i = 0; i < oracle_means.size(); ++i) {
    audit.gaps[i] = best - oracle_means[i];
    if (audit.gaps[i] > delta_threshold) audit.above_threshold.push_back(i);
  }

  const double log_t = std::log(static_cast<double>(std::max<std::int64_t>(audit.steps, 2)));
  std::vector<double> pull_threshold(oracle_means.size(), 0.0);
  for (std::size_t i : audit.above_threshold)
    pull_threshold[i] = 8.0 * log_t / (audit.gaps[i] * audit.gaps[i]);

  double bound = 0.0;
  for (std::size_t i : audit.above_threshold) bound += 8.0 * log_t / (audit.gaps[i] * audit.gaps[i]);
  // pi^2 / 3 = 3.2898...
  audit.expectation_bound =
      bound + (1.0 + 9.869604401089358 / 3.0) * static_cast<double>(audit.above_threshold.size());

  std::vector<std::int64_t> pulls(oracle_means.size(), 0);
  for (std::size_t t = 0; t < chosen.size(); ++t) {
    const std::size_t a = chosen[t];
    if (a >= oracle_means.size())
      throw std::invalid_argument("suboptimality_audit: arm id out of range");
    pulls[a] += 1;
    const bool is_above = audit.gaps[a] > delta_threshold;
    const bool undersampled =
        is_above && static_cast<double>(pulls[a]) <= pull_threshold[a];
    if (undersampled) {
      audit.undersampled_choices += 1;
    } else {
      if (audit.gaps[a] > delta) audit.exceed_events += 1;
      audit.exceed_probability_budget +=
          one_step_failure_probability(static_cast<std::int64_t>(t) + 1, n_mod, m);
    }
  }
  return audit;
}

}  // namespace jamlab
