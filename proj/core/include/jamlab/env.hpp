#pragma once

#include <cstdint>
#include <unordered_map>
#include <vector>

#include "jamlab/oracle.hpp"
#include "jamlab/phy.hpp"

namespace jamlab {

enum class Fidelity { Symbol, Analytic };

enum class RewardKind { RawSer, RawPer, ThresholdPerOverJnr, ThresholdSerOverJnr };

// Reward construction from one step's feedback. Thresholded kinds divide by
// the linear jnr; with jnr_min >= 1 that keeps rewards in [0, 1 - target].
struct RewardSpec {
  RewardKind kind = RewardKind::RawSer;
  double target = 0.0;
};

struct Feedback {
  std::int64_t acks = 0;
  std::int64_t nacks = 0;
  double per_estimate = 0.0;  // weight-combined across victims
  double ser_estimate = 0.0;  // any-error inversion of per_estimate
  double reward = 0.0;
  bool saturated = false;  // per_estimate hit 1
};

// Reward of one step given the combined packet/symbol error estimates.
double reward_value(const RewardSpec& spec, double per_estimate, double ser_estimate,
                    double jnr_linear);

struct VictimPolicy {
  enum class Kind { Static, Iid, Adaptive, Periodic };
  enum class AdaptRule { UniformRedraw, Step };

  Kind kind = Kind::Static;
  Scheme scheme = Scheme::Bpsk;             // static / adaptive / periodic
  std::vector<Scheme> scheme_set = {};      // iid (uniform over the set)
  double snr_db_min = 0.0;                  // draw range in dB; static uses min
  double snr_db_max = 0.0;
  std::int64_t period = 0;                  // periodic: redraw every `period` steps
  std::int64_t adapt_window = 0;            // adaptive: decision cadence in steps
  double trigger = 0.0;                     // adaptive: windowed PER trigger
  AdaptRule adapt_rule = AdaptRule::UniformRedraw;
  double step_db = 3.0;                     // adaptive step rule increment

  static VictimPolicy fixed(Scheme s, double snr_db) {
    VictimPolicy p;
    p.kind = Kind::Static;
    p.scheme = s;
    p.snr_db_min = p.snr_db_max = snr_db;
    return p;
  }
};

struct VictimProfile {
  VictimPolicy policy;
  std::int64_t n_symbols = 10000;
  PacketRule rule = PacketRule::any_error();
  PhaseMode phase_mode = PhaseMode::Coherent;
};

// Realized transmitter state of one victim.
struct VictimState {
  Scheme scheme = Scheme::Bpsk;
  double snr = 1.0;  // linear
};

// One adaptive decision: at a window boundary, a victim whose windowed PER
// exceeded the trigger either redraws its power uniformly or steps it up;
// below the trigger the step rule backs the power off.
VictimState adaptive_update(const VictimPolicy& policy, const VictimState& state,
                            double windowed_per, Rng& rng);

class Environment {
 public:
  Environment(std::vector<VictimProfile> profiles, std::vector<double> weights,
              RewardSpec reward, Fidelity fidelity, int packets_per_step,
              std::uint64_t seed);

  // Convenience single-victim constructor.
  Environment(VictimProfile profile, RewardSpec reward, Fidelity fidelity,
              int packets_per_step, std::uint64_t seed);

  Feedback step(const JammerAction& action);

  // Expected per-step reward of an action. Stationary i.i.d. victims are
  // averaged over their strategy distribution; other policies use the
  // current realized state (a per-segment oracle).
  double expected_reward(const JammerAction& action) const;

  // Expected SER at one victim for the current state.
  double expected_ser_now(std::size_t victim, const JammerAction& action) const;

  std::int64_t now() const { return t_; }
  std::size_t victim_count() const { return profiles_.size(); }
  const VictimState& victim_state(std::size_t i) const { return states_[i]; }
  const VictimProfile& profile(std::size_t i) const { return profiles_[i]; }
  int packets_per_step() const { return packets_per_step_; }

  // Changes whenever any victim's realized state changes; keys oracle caches.
  std::uint64_t state_key() const { return state_key_; }

 private:
  struct PerVictimDraw {
    std::int64_t nacks = 0;
    double ser_sample = 0.0;
  };

  void advance_victims();
  void refresh_state_key();
  PerVictimDraw draw_symbol(std::size_t i, const JammerAction& action);
  PerVictimDraw draw_analytic(std::size_t i, const JammerAction& action);
  double expected_reward_for_states(const JammerAction& action,
                                    const std::vector<VictimState>& states) const;
  double expected_per(std::size_t i, const VictimState& st, const JammerAction& a) const;

  std::vector<VictimProfile> profiles_;
  std::vector<double> weights_;
  RewardSpec reward_;
  Fidelity fidelity_;
  int packets_per_step_;
  StreamSeeder seeder_;
  std::vector<VictimState> states_;
  std::vector<std::int64_t> window_packets_;  // adaptive accounting
  std::vector<std::int64_t> window_nacks_;
  std::int64_t t_ = 0;
  std::uint64_t state_key_ = 0;
  mutable std::unordered_map<std::uint64_t, double> reward_cache_;
};

}  // namespace jamlab
