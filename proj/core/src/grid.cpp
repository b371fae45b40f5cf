#include "jamlab/grid.hpp"

#include <cmath>
#include <stdexcept>

namespace jamlab {

ActionGrid ActionGrid::build(const ActionSpace& space, int m) {
  if (m < 1) throw std::invalid_argument("ActionGrid: m must be >= 1");
  if (space.schemes.empty()) throw std::invalid_argument("ActionGrid: empty scheme set");
  if (space.jnr_max < space.jnr_min)
    throw std::invalid_argument("ActionGrid: jnr_max < jnr_min");
  ActionGrid g;
  g.m = m;
  g.schemes = space.schemes;
  const bool degenerate = space.jnr_max == space.jnr_min;
  if (degenerate) {
    g.jnr_points.push_back(space.jnr_min);
  } else {
    for (int k = 1; k <= m; ++k)
      g.jnr_points.push_back(space.jnr_min + (space.jnr_max - space.jnr_min) *
                                                 static_cast<double>(k) / m);
  }
  for (int k = 1; k <= m; ++k) g.rho_points.push_back(static_cast<double>(k) / m);
  const std::int64_t count = static_cast<std::int64_t>(g.schemes.size()) *
                             static_cast<std::int64_t>(g.jnr_points.size()) *
                             static_cast<std::int64_t>(g.rho_points.size());
  if (count > space.arm_budget)
    throw std::runtime_error("ActionGrid: arm count exceeds configured budget");
  g.arms.reserve(static_cast<std::size_t>(count));
  for (Scheme s : g.schemes)
    for (double jnr : g.jnr_points)
      for (double rho : g.rho_points) g.arms.push_back(JammerAction{s, jnr, rho});
  return g;
}

double normalize_jnr(double jnr, const ActionSpace& space) {
  if (space.jnr_max == space.jnr_min) return 1.0;
  return (jnr - space.jnr_min) / (space.jnr_max - space.jnr_min);
}

double normalized_distance(const JammerAction& a, const JammerAction& b,
                           const ActionSpace& space) {
  const double dj = normalize_jnr(a.jnr, space) - normalize_jnr(b.jnr, space);
  const double dr = a.rho - b.rho;
  return std::sqrt(dj * dj + dr * dr);
}

int compute_m(std::int64_t round_length, const HolderParams& holder) {
  if (round_length < 1) throw std::invalid_argument("compute_m: round_length must be >= 1");
  if (round_length <= 2) return 1;
  const double t = static_cast<double>(round_length);
  const double alpha = holder.exponent_alpha;
  const double value = std::pow(
      std::sqrt(t / std::log(t)) * holder.constant_l * std::pow(2.0, alpha / 2.0),
      1.0 / (1.0 + alpha));
  const int m = static_cast<int>(std::ceil(value));
  return m < 1 ? 1 : m;
}

namespace {

double elimination_residual(double m, double t, const HolderParams& h) {
  const double m2 = m * m;
  const double explore =
      std::sqrt(m2 * t) * std::log(m2 * std::log(m2)) / std::sqrt(std::log(m2));
  return t * h.constant_l * std::pow(2.0 / m2, h.exponent_alpha / 2.0) - explore;
}

}  // namespace

EliminationM compute_m_elimination(std::int64_t round_length, const HolderParams& holder) {
  if (round_length < 4)
    throw std::invalid_argument("compute_m_elimination: round_length must be >= 4");
  const double t = static_cast<double>(round_length);
  double lo = 2.0, hi = 1e6;
  if (elimination_residual(lo, t, holder) <= 0.0) return {2, true};
  if (elimination_residual(hi, t, holder) > 0.0) return {2, true};
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (elimination_residual(mid, t, holder) > 0.0)
      lo = mid;
    else
      hi = mid;
  }
  return {static_cast<int>(std::ceil(hi)), false};
}

std::vector<RoundSpan> round_schedule(std::int64_t horizon) {
  if (horizon < 1) throw std::invalid_argument("round_schedule: horizon must be >= 1");
  std::vector<RoundSpan> rounds;
  std::int64_t t = 1;
  while (t <= horizon) {
    RoundSpan r;
    r.start = t;
    r.nominal = t;  // round starting at step 2^k has nominal length 2^k
    r.length = std::min(2 * t - 1, horizon) - t + 1;
    rounds.push_back(r);
    t *= 2;
  }
  return rounds;
}

}  // namespace jamlab
