#include "jamlab/presets.hpp"

#include <stdexcept>

namespace jamlab {

namespace {

VictimConfig static_victim(Scheme s, double snr_db, std::int64_t n_symbols, PacketRule rule,
                           PhaseMode phase = PhaseMode::Coherent) {
  VictimConfig v;
  v.policy = VictimPolicy::fixed(s, snr_db);
  v.n_symbols = n_symbols;
  v.rule = rule;
  v.phase_mode = phase;
  return v;
}

ExperimentConfig base_single_user() {
  ExperimentConfig c;
  c.horizon = 1'000'000;
  c.seeds = 30;
  c.fidelity = Fidelity::Analytic;
  c.packets_per_step = 1;
  c.jnr_db_min = 10.0;  // power fixed at 10 dB; scheme and rho are learned
  c.jnr_db_max = 10.0;
  c.reward = {RewardKind::RawSer, 0.0};
  c.algorithm = AlgorithmKind::JbUcb1;
  c.victims = {static_victim(Scheme::Bpsk, 20.0, 10000, PacketRule::any_error())};
  return c;
}

}  // namespace

ExperimentConfig preset(const std::string& name) {
  if (name == "fig3") {
    // Static BPSK victim at 20 dB, SER feedback, power fixed at 10 dB.
    ExperimentConfig c = base_single_user();
    c.name = "fig3";
    return c;
  }
  if (name == "fig4") {
    // Same setup against a QPSK victim.
    ExperimentConfig c = base_single_user();
    c.name = "fig4";
    c.victims[0].policy.scheme = Scheme::Qpsk;
    return c;
  }
  if (name == "fig5") {
    // Non-coherent variant: random phase offset between jammer and victim.
    ExperimentConfig c = base_single_user();
    c.name = "fig5";
    c.victims[0].phase_mode = PhaseMode::RandomPerPacket;
    return c;
  }
  if (name == "fig6") {
    // Packet-error feedback with the 10% threshold rule.
    ExperimentConfig c = base_single_user();
    c.name = "fig6";
    c.reward = {RewardKind::RawPer, 0.0};
    c.victims[0].rule = PacketRule::threshold(0.10);
    return c;
  }
  if (name == "fig9") {
    // Arm elimination over the full power range with the efficiency reward.
    ExperimentConfig c = base_single_user();
    c.name = "fig9";
    c.horizon = 100'000;
    c.algorithm = AlgorithmKind::JbElim;
    c.jnr_db_min = 0.0;
    c.jnr_db_max = 20.0;
    c.reward = {RewardKind::ThresholdPerOverJnr, 0.8};
    c.victims[0].rule = PacketRule::threshold(0.10);
    return c;
  }
  if (name == "fig11") {
    // Drifting window against a victim that redraws its power periodically.
    ExperimentConfig c = base_single_user();
    c.name = "fig11";
    c.algorithm = AlgorithmKind::JbDrifting;
    c.window_w = 25'000;
    c.jnr_db_min = 0.0;
    c.jnr_db_max = 20.0;
    c.reward = {RewardKind::ThresholdPerOverJnr, 0.8};
    c.victims[0].rule = PacketRule::threshold(0.10);
    c.victims[0].policy.kind = VictimPolicy::Kind::Periodic;
    c.victims[0].policy.period = 50'000;
    c.victims[0].policy.snr_db_min = 0.0;
    c.victims[0].policy.snr_db_max = 20.0;
    return c;
  }
  if (name == "fig12") {
    // Two BPSK victims at 15 dB and 5 dB, mean-PER target 0.8.
    ExperimentConfig c = base_single_user();
    c.name = "fig12";
    c.jnr_db_min = 0.0;
    c.jnr_db_max = 20.0;
    c.reward = {RewardKind::ThresholdPerOverJnr, 0.8};
    c.victims = {static_victim(Scheme::Bpsk, 15.0, 10000, PacketRule::threshold(0.10)),
                 static_victim(Scheme::Bpsk, 5.0, 10000, PacketRule::threshold(0.10))};
    return c;
  }
  if (name == "fig13") {
    // Mixed pair: QPSK at 5 dB and BPSK at 15 dB.
    ExperimentConfig c = base_single_user();
    c.name = "fig13";
    c.jnr_db_min = 0.0;
    c.jnr_db_max = 20.0;
    c.reward = {RewardKind::ThresholdPerOverJnr, 0.8};
    c.victims = {static_victim(Scheme::Qpsk, 5.0, 10000, PacketRule::threshold(0.10)),
                 static_victim(Scheme::Bpsk, 15.0, 10000, PacketRule::threshold(0.10))};
    return c;
  }
  throw std::out_of_range("unknown preset: " + name);
}

std::vector<std::string> preset_names() {
  return {"fig3", "fig4", "fig5", "fig6", "fig9", "fig11", "fig12", "fig13"};
}

}  // namespace jamlab
