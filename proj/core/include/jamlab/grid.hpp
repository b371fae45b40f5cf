#pragma once

#include <cstdint>
#include <vector>

#include "jamlab/oracle.hpp"
#include "jamlab/phy.hpp"

namespace jamlab {

// Jammer action set before discretization: a finite waveform set and a
// continuous (jnr, rho) box. jnr bounds are linear power ratios.
struct ActionSpace {
  std::vector<Scheme> schemes = {Scheme::AwgnNoise, Scheme::Bpsk, Scheme::Qpsk};
  double jnr_min = 1.0;
  double jnr_max = 100.0;
  std::int64_t arm_budget = 2'000'000;
};

// Uniform discretization of the action box. rho points are {1/m, ..., 1};
// jnr points are jnr_min + (jnr_max - jnr_min) * {1/m, ..., 1}. A degenerate
// jnr range (min == max) collapses to a single point per scheme/rho.
struct ActionGrid {
  int m = 1;
  std::vector<Scheme> schemes;
  std::vector<double> jnr_points;
  std::vector<double> rho_points;
  std::vector<JammerAction> arms;  // scheme-major, then jnr, then rho

  static ActionGrid build(const ActionSpace& space, int m);
  std::size_t size() const { return arms.size(); }
};

// Normalized coordinates for the Hölder metric: rho is taken raw in (0, 1];
// jnr is mapped affinely onto (0, 1] so one constant serves both axes.
double normalize_jnr(double jnr, const ActionSpace& space);
double normalized_distance(const JammerAction& a, const JammerAction& b,
                           const ActionSpace& space);

// Grid resolution balancing discretization loss against exploration cost:
// ceil((sqrt(T/log T) * L * 2^(alpha/2))^(1/(1+alpha))). Rounds of length
// 1 or 2 sit in the log-singularity region and use m = 1.
int compute_m(std::int64_t round_length, const HolderParams& holder);

struct EliminationM {
  int m = 2;
  bool bracket_failed = false;  // no sign change in [2, 1e6]; m pinned at 2
};

// Grid resolution for the elimination inner policy: the positive root of
//   T*L*(2/M^2)^(alpha/2) - sqrt(M^2*T) * log(M^2 log M^2) / sqrt(log M^2)
// found by bisection (the first term falls and the second rises in M, so
// the root is unique), then rounded up.
EliminationM compute_m_elimination(std::int64_t round_length, const HolderParams& holder);

// Doubling schedule: rounds of length 1, 2, 4, ... covering steps
// [length, min(2*length - 1, horizon)], the last one truncated.
struct RoundSpan {
  std::int64_t start = 1;   // first step of the round, 1-based
  std::int64_t length = 1;  // realized length after truncation
  std::int64_t nominal = 1; // 2^k length before truncation
};
std::vector<RoundSpan> round_schedule(std::int64_t horizon);

}  // namespace jamlab
