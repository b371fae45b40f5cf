#include "jamlab/env.hpp"

#include <bit>
#include <cmath>
#include <stdexcept>

namespace jamlab {

namespace {

constexpr std::uint64_t kIidTag = 0x11D5'7A7E'11D5'7A7Eull;

std::uint64_t action_key(const JammerAction& a) {
  std::uint64_t k = static_cast<std::uint64_t>(a.scheme) + 1;
  k = hash_combine(k, std::bit_cast<std::uint64_t>(a.jnr));
  k = hash_combine(k, std::bit_cast<std::uint64_t>(a.rho));
  return k;
}

std::uint64_t state_bits(const VictimState& s) {
  return hash_combine(static_cast<std::uint64_t>(s.scheme) + 17,
                      std::bit_cast<std::uint64_t>(s.snr));
}

double normal_cdf(double z) { return 0.5 * std::erfc(-z / 1.4142135623730951); }
double normal_pdf(double z) {
  return std::exp(-0.5 * z * z) / 2.5066282746310005;
}

// E[(Z - t)^+] for Z ~ N(mu, sigma^2).
double normal_hinge(double mu, double sigma, double t) {
  if (sigma <= 0.0) return std::max(0.0, mu - t);
  const double z = (mu - t) / sigma;
  return (mu - t) * normal_cdf(z) + sigma * normal_pdf(z);
}

double binomial_pmf_step(double pmf, std::int64_t n, std::int64_t k, double p) {
  // pmf(k+1) from pmf(k)
  return pmf * (static_cast<double>(n - k) / static_cast<double>(k + 1)) * (p / (1.0 - p));
}

}  // namespace

double reward_value(const RewardSpec& spec, double per_estimate, double ser_estimate,
                    double jnr_linear) {
  double r = 0.0;
  switch (spec.kind) {
    case RewardKind::RawSer: r = ser_estimate; break;
    case RewardKind::RawPer: r = per_estimate; break;
    case RewardKind::ThresholdPerOverJnr:
      r = std::max(0.0, per_estimate - spec.target) / jnr_linear;
      break;
    case RewardKind::ThresholdSerOverJnr:
      r = std::max(0.0, ser_estimate - spec.target) / jnr_linear;
      break;
  }
  return std::clamp(r, 0.0, 1.0);
}

VictimState adaptive_update(const VictimPolicy& policy, const VictimState& state,
                            double windowed_per, Rng& rng) {
  if (policy.kind != VictimPolicy::Kind::Adaptive)
    throw std::invalid_argument("adaptive_update: policy is not adaptive");
  VictimState next = state;
  const bool fired = windowed_per > policy.trigger;
  if (policy.adapt_rule == VictimPolicy::AdaptRule::UniformRedraw) {
    if (fired)
      next.snr = db_to_linear(rng.uniform_in(policy.snr_db_min, policy.snr_db_max));
    return next;
  }
  double snr_db = linear_to_db(state.snr);
  snr_db += fired ? policy.step_db : -policy.step_db;
  snr_db = std::clamp(snr_db, policy.snr_db_min, policy.snr_db_max);
  next.snr = db_to_linear(snr_db);
  return next;
}

Environment::Environment(std::vector<VictimProfile> profiles, std::vector<double> weights,
                         RewardSpec reward, Fidelity fidelity, int packets_per_step,
                         std::uint64_t seed)
    : profiles_(std::move(profiles)),
      weights_(std::move(weights)),
      reward_(reward),
      fidelity_(fidelity),
      packets_per_step_(packets_per_step),
      seeder_(seed) {
  if (profiles_.empty()) throw std::invalid_argument("Environment: no victim profiles");
  if (packets_per_step_ < 1)
    throw std::invalid_argument("Environment: packets_per_step must be >= 1");
  if (weights_.empty())
    weights_.assign(profiles_.size(), 1.0 / static_cast<double>(profiles_.size()));
  if (weights_.size() != profiles_.size())
    throw std::invalid_argument("Environment: weight count does not match victim count");
  double sum = 0.0;
  for (double w : weights_) {
    if (w < 0.0) throw std::invalid_argument("Environment: negative victim weight");
    sum += w;
  }
  if (std::abs(sum - 1.0) > 1e-9)
    throw std::invalid_argument("Environment: victim weights must sum to 1");

  states_.resize(profiles_.size());
  window_packets_.assign(profiles_.size(), 0);
  window_nacks_.assign(profiles_.size(), 0);
  for (std::size_t i = 0; i < profiles_.size(); ++i) {
    const auto& p = profiles_[i].policy;
    Rng init = seeder_.stream(0xC0DE, i, 0);
    switch (p.kind) {
      case VictimPolicy::Kind::Static:
        states_[i] = {p.scheme, db_to_linear(p.snr_db_min)};
        break;
      case VictimPolicy::Kind::Iid: {
        if (p.scheme_set.empty())
          throw std::invalid_argument("Environment: iid victim needs a scheme set");
        const Scheme s = p.scheme_set[init.uniform_index(p.scheme_set.size())];
        states_[i] = {s, db_to_linear(init.uniform_in(p.snr_db_min, p.snr_db_max))};
        break;
      }
      case VictimPolicy::Kind::Adaptive:
      case VictimPolicy::Kind::Periodic:
        if (p.kind == VictimPolicy::Kind::Periodic && p.period < 1)
          throw std::invalid_argument("Environment: periodic victim needs period >= 1");
        if (p.kind == VictimPolicy::Kind::Adaptive && p.adapt_window < 1)
          throw std::invalid_argument("Environment: adaptive victim needs adapt_window >= 1");
        states_[i] = {p.scheme, db_to_linear(init.uniform_in(p.snr_db_min, p.snr_db_max))};
        break;
    }
    if (profiles_[i].n_symbols < 1)
      throw std::invalid_argument("Environment: n_symbols must be >= 1");
  }
  refresh_state_key();
}

Environment::Environment(VictimProfile profile, RewardSpec reward, Fidelity fidelity,
                         int packets_per_step, std::uint64_t seed)
    : Environment(std::vector<VictimProfile>{std::move(profile)}, {}, reward, fidelity,
                  packets_per_step, seed) {}

void Environment::refresh_state_key() {
  std::uint64_t k = 0x57A7E;
  for (std::size_t i = 0; i < profiles_.size(); ++i) {
    // Stationary i.i.d. victims contribute a constant so oracle caches stay
    // valid across their per-step redraws (expected values mix over the
    // strategy distribution instead).
    if (profiles_[i].policy.kind == VictimPolicy::Kind::Iid)
      k = hash_combine(k, kIidTag);
    else
      k = hash_combine(k, state_bits(states_[i]));
  }
  state_key_ = k;
}

void Environment::advance_victims() {
  bool changed = false;
  for (std::size_t i = 0; i < profiles_.size(); ++i) {
    const auto& p = profiles_[i].policy;
    switch (p.kind) {
      case VictimPolicy::Kind::Static:
        break;
      case VictimPolicy::Kind::Iid: {
        Rng r = seeder_.stream(0xD0D0 + static_cast<std::uint64_t>(t_), i, 9);
        states_[i].scheme = p.scheme_set[r.uniform_index(p.scheme_set.size())];
        states_[i].snr = db_to_linear(r.uniform_in(p.snr_db_min, p.snr_db_max));
        changed = true;
        break;
      }
      case VictimPolicy::Kind::Periodic:
        if (t_ > 1 && (t_ - 1) % p.period == 0) {
          Rng r = seeder_.stream(0xD0D0 + static_cast<std::uint64_t>(t_), i, 9);
          states_[i].snr = db_to_linear(r.uniform_in(p.snr_db_min, p.snr_db_max));
          changed = true;
        }
        break;
      case VictimPolicy::Kind::Adaptive:
        if (t_ > 1 && (t_ - 1) % p.adapt_window == 0) {
          const double windowed_per =
              window_packets_[i] > 0
                  ? static_cast<double>(window_nacks_[i]) /
                        static_cast<double>(window_packets_[i])
                  : 0.0;
          Rng r = seeder_.stream(0xD0D0 + static_cast<std::uint64_t>(t_), i, 9);
          states_[i] = adaptive_update(p, states_[i], windowed_per, r);
          window_packets_[i] = 0;
          window_nacks_[i] = 0;
          changed = true;
        }
        break;
    }
  }
  if (changed) refresh_state_key();
}

Environment::PerVictimDraw Environment::draw_symbol(std::size_t i, const JammerAction& action) {
  const auto& prof = profiles_[i];
  ChannelParams ch{states_[i].snr, prof.phase_mode};
  PerVictimDraw out;
  std::int64_t total_errors = 0;
  for (int p = 0; p < packets_per_step_; ++p) {
    const std::uint64_t packet_id =
        hash_combine(hash_combine(static_cast<std::uint64_t>(t_), i),
                     static_cast<std::uint64_t>(p));
    PacketStreams streams = PacketStreams::derive(seeder_, packet_id);
    const PacketOutcome pkt =
        simulate_packet(states_[i].scheme, ch, action, prof.n_symbols, prof.rule, streams);
    if (pkt.packet_error) ++out.nacks;
    total_errors += pkt.symbol_errors;
  }
  out.ser_sample = static_cast<double>(total_errors) /
                   static_cast<double>(prof.n_symbols * packets_per_step_);
  return out;
}

Environment::PerVictimDraw Environment::draw_analytic(std::size_t i,
                                                      const JammerAction& action) {
  const auto& prof = profiles_[i];
  const bool phase_matters = prof.phase_mode == PhaseMode::RandomPerPacket &&
                             action.scheme != Scheme::AwgnNoise;
  Rng r = seeder_.stream(0xA11 + static_cast<std::uint64_t>(t_), i, 1);
  PerVictimDraw out;
  std::int64_t total_errors = 0;
  const double clean = clean_ser(states_[i].scheme, states_[i].snr);
  for (int p = 0; p < packets_per_step_; ++p) {
    double ser;
    if (!phase_matters) {
      ser = expected_ser(states_[i].scheme, action.scheme, states_[i].snr, action.jnr,
                         action.rho, true);
    } else {
      // Per-packet phase offset, drawn from the same node set the oracle
      // averages over so sampled and expected values agree exactly.
      const int node = static_cast<int>(r.uniform_index(kPhaseNodes));
      const double phi = 2.0 * 3.14159265358979323846 * node / kPhaseNodes;
      const double jammed = expected_ser_at_phase(states_[i].scheme, action.scheme,
                                                  states_[i].snr, action.jnr / action.rho, phi);
      ser = action.rho * jammed + (1.0 - action.rho) * clean;
    }
    const double per = per_from_ser(ser, prof.n_symbols, prof.rule);
    if (r.bernoulli(per)) ++out.nacks;
    total_errors += r.binomial(prof.n_symbols, ser);
  }
  out.ser_sample = static_cast<double>(total_errors) /
                   static_cast<double>(prof.n_symbols * packets_per_step_);
  return out;
}

Feedback Environment::step(const JammerAction& action) {
  if (!(action.rho > 0.0) || action.rho > 1.0)
    throw std::invalid_argument("Environment::step: rho must lie in (0, 1]");
  ++t_;
  advance_victims();

  Feedback fb;
  double per_combined = 0.0;
  double ser_combined = 0.0;
  for (std::size_t i = 0; i < profiles_.size(); ++i) {
    const PerVictimDraw d = fidelity_ == Fidelity::Symbol ? draw_symbol(i, action)
                                                          : draw_analytic(i, action);
    fb.nacks += d.nacks;
    fb.acks += packets_per_step_ - d.nacks;
    const double per_i = static_cast<double>(d.nacks) / packets_per_step_;
    per_combined += weights_[i] * per_i;
    ser_combined += weights_[i] * d.ser_sample;
    window_packets_[i] += packets_per_step_;
    window_nacks_[i] += d.nacks;
  }
  fb.per_estimate = per_combined;
  const SerEstimate inv = ser_from_per(per_combined, profiles_[0].n_symbols);
  fb.ser_estimate = inv.ser;
  fb.saturated = inv.saturated;

  fb.reward = reward_value(reward_, per_combined, ser_combined, action.jnr);
  return fb;
}

double Environment::expected_ser_now(std::size_t victim, const JammerAction& action) const {
  const auto& prof = profiles_[victim];
  const bool coherent = prof.phase_mode == PhaseMode::Coherent;
  return expected_ser(states_[victim].scheme, action.scheme, states_[victim].snr, action.jnr,
                      action.rho, coherent);
}

double Environment::expected_per(std::size_t i, const VictimState& st,
                                 const JammerAction& a) const {
  const auto& prof = profiles_[i];
  const bool coherent = prof.phase_mode == PhaseMode::Coherent;
  const double ser = expected_ser(st.scheme, a.scheme, st.snr, a.jnr, a.rho, coherent);
  if (coherent || a.scheme == Scheme::AwgnNoise)
    return per_from_ser(ser, prof.n_symbols, prof.rule);
  // Phase is drawn per packet: average the packet error probability over
  // the phase nodes (it is not the transform of the phase-averaged SER).
  const double clean = clean_ser(st.scheme, st.snr);
  double acc = 0.0;
  for (int k = 0; k < kPhaseNodes; ++k) {
    const double phi = 2.0 * 3.14159265358979323846 * k / kPhaseNodes;
    const double jammed = expected_ser_at_phase(st.scheme, a.scheme, st.snr, a.jnr / a.rho, phi);
    acc += per_from_ser(a.rho * jammed + (1.0 - a.rho) * clean, prof.n_symbols, prof.rule);
  }
  return acc / kPhaseNodes;
}

double Environment::expected_reward_for_states(const JammerAction& a,
                                               const std::vector<VictimState>& states) const {
  const int P = packets_per_step_;
  switch (reward_.kind) {
    case RewardKind::RawSer: {
      double acc = 0.0;
      for (std::size_t i = 0; i < profiles_.size(); ++i) {
        const bool coherent = profiles_[i].phase_mode == PhaseMode::Coherent;
        acc += weights_[i] * expected_ser(states[i].scheme, a.scheme, states[i].snr, a.jnr,
                                          a.rho, coherent);
      }
      return acc;
    }
    case RewardKind::RawPer: {
      double acc = 0.0;
      for (std::size_t i = 0; i < profiles_.size(); ++i)
        acc += weights_[i] * expected_per(i, states[i], a);
      return acc;
    }
    case RewardKind::ThresholdPerOverJnr: {
      // Exact hinge expectation over independent Binomial(P, per_i) draws.
      std::vector<double> pers(profiles_.size());
      for (std::size_t i = 0; i < profiles_.size(); ++i) pers[i] = expected_per(i, states[i], a);
      double expect = 0.0;
      // Recursive enumeration over per-victim nack counts.
      std::vector<std::int64_t> counts(profiles_.size(), 0);
      const std::size_t combos_limit = 200000;
      double total_combos = 1.0;
      for (std::size_t i = 0; i < profiles_.size(); ++i) total_combos *= (P + 1);
      if (total_combos <= static_cast<double>(combos_limit)) {
        std::vector<std::vector<double>> pmf(profiles_.size(), std::vector<double>(P + 1));
        for (std::size_t i = 0; i < profiles_.size(); ++i) {
          const double p = pers[i];
          if (p >= 1.0 - 1e-12) {
            for (int k = 0; k <= P; ++k) pmf[i][k] = (k == P) ? 1.0 : 0.0;
            continue;
          }
          double v = std::pow(1.0 - p, P);
          for (int k = 0; k <= P; ++k) {
            pmf[i][k] = v;
            if (k < P) v = binomial_pmf_step(v, P, k, p);
          }
        }
        const std::size_t V = profiles_.size();
        std::vector<int> idx(V, 0);
        for (;;) {
          double prob = 1.0, frac = 0.0;
          for (std::size_t i = 0; i < V; ++i) {
            prob *= pmf[i][idx[i]];
            frac += weights_[i] * static_cast<double>(idx[i]) / P;
          }
          expect += prob * std::max(0.0, frac - reward_.target);
          std::size_t d = 0;
          while (d < V && ++idx[d] > P) idx[d++] = 0;
          if (d == V) break;
        }
      } else {
        double mu = 0.0, var = 0.0;
        for (std::size_t i = 0; i < profiles_.size(); ++i) {
          mu += weights_[i] * pers[i];
          var += weights_[i] * weights_[i] * pers[i] * (1.0 - pers[i]) / P;
        }
        expect = normal_hinge(mu, std::sqrt(var), reward_.target);
      }
      return std::clamp(expect / a.jnr, 0.0, 1.0);
    }
    case RewardKind::ThresholdSerOverJnr: {
      if (profiles_.size() == 1 && profiles_[0].phase_mode == PhaseMode::Coherent) {
        // Exact partial expectation over Binomial(n * P, ser), evaluated in
        // log space over the mean +- 12 sigma window.
        const double ser = expected_ser(states[0].scheme, a.scheme, states[0].snr, a.jnr,
                                        a.rho, true);
        const std::int64_t n = profiles_[0].n_symbols * P;
        const double t = reward_.target;
        if (ser <= 0.0) return 0.0;
        if (ser >= 1.0) return std::clamp((1.0 - t) / a.jnr, 0.0, 1.0);
        const double mean = static_cast<double>(n) * ser;
        const double sd = std::sqrt(mean * (1.0 - ser));
        const std::int64_t klo = std::max<std::int64_t>(
            0, static_cast<std::int64_t>(std::floor(mean - 12.0 * sd)));
        const std::int64_t khi = std::min<std::int64_t>(
            n, static_cast<std::int64_t>(std::ceil(mean + 12.0 * sd)));
        const double lgn = std::lgamma(static_cast<double>(n) + 1.0);
        const double ls = std::log(ser), l1s = std::log1p(-ser);
        double expect = 0.0;
        for (std::int64_t k = klo; k <= khi; ++k) {
          const double frac = static_cast<double>(k) / static_cast<double>(n);
          if (frac <= t) continue;
          const double lp = lgn - std::lgamma(static_cast<double>(k) + 1.0) -
                            std::lgamma(static_cast<double>(n - k) + 1.0) +
                            static_cast<double>(k) * ls + static_cast<double>(n - k) * l1s;
          expect += std::exp(lp) * (frac - t);
        }
        return std::clamp(expect / a.jnr, 0.0, 1.0);
      }
      double mu = 0.0, var = 0.0;
      for (std::size_t i = 0; i < profiles_.size(); ++i) {
        const bool coherent = profiles_[i].phase_mode == PhaseMode::Coherent;
        const double ser = expected_ser(states[i].scheme, a.scheme, states[i].snr, a.jnr,
                                        a.rho, coherent);
        mu += weights_[i] * ser;
        var += weights_[i] * weights_[i] * ser * (1.0 - ser) /
               (static_cast<double>(profiles_[i].n_symbols) * P);
      }
      return std::clamp(normal_hinge(mu, std::sqrt(var), reward_.target) / a.jnr, 0.0, 1.0);
    }
  }
  return 0.0;
}

double Environment::expected_reward(const JammerAction& action) const {
  const std::uint64_t key = hash_combine(state_key_, action_key(action));
  if (auto it = reward_cache_.find(key); it != reward_cache_.end()) return it->second;

  double value;
  const bool single_iid =
      profiles_.size() == 1 && profiles_[0].policy.kind == VictimPolicy::Kind::Iid;
  if (single_iid) {
    // Stationary mixture over the strategy distribution: uniform over the
    // scheme set and over the dB power range (64 midpoint nodes).
    const auto& p = profiles_[0].policy;
    constexpr int kSnrNodes = 64;
    double acc = 0.0;
    std::vector<VictimState> st(1);
    for (Scheme s : p.scheme_set) {
      for (int k = 0; k < kSnrNodes; ++k) {
        const double db =
            p.snr_db_min + (p.snr_db_max - p.snr_db_min) * (k + 0.5) / kSnrNodes;
        st[0] = {s, db_to_linear(db)};
        acc += expected_reward_for_states(action, st);
      }
    }
    value = acc / (static_cast<double>(p.scheme_set.size()) * kSnrNodes);
  } else {
    value = expected_reward_for_states(action, states_);
  }
  reward_cache_[key] = value;
  return value;
}

}  // namespace jamlab
