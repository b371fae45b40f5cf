#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "jamlab/env.hpp"
#include "jamlab/grid.hpp"
#include "jamlab/meta.hpp"

namespace jamlab {

// Raised for invalid configurations; the message lists every violation.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class AlgorithmKind { JbUcb1, JbElim, JbDrifting, EpsilonGreedy, FixedAwgn };

const char* to_string(AlgorithmKind k);

struct VictimConfig {
  VictimPolicy policy;
  double weight = -1.0;  // < 0: uniform
  std::int64_t n_symbols = 10000;
  PacketRule rule = PacketRule::any_error();
  PhaseMode phase_mode = PhaseMode::Coherent;
};

struct ExperimentConfig {
  std::string name = "experiment";
  std::int64_t horizon = 1 << 17;
  int seeds = 1;
  std::uint64_t seed_base = 1;
  Fidelity fidelity = Fidelity::Analytic;
  int packets_per_step = 1;

  std::vector<VictimConfig> victims;

  std::vector<Scheme> jammer_schemes = {Scheme::AwgnNoise, Scheme::Bpsk, Scheme::Qpsk};
  double jnr_db_min = 0.0;
  double jnr_db_max = 20.0;
  RewardSpec reward;
  std::int64_t arm_budget = 2'000'000;

  AlgorithmKind algorithm = AlgorithmKind::JbUcb1;
  std::int64_t window_w = 25000;   // jb-drifting
  double epsilon0 = 0.9;           // epsilon-greedy
  int fixed_m = 0;                 // 0: per-round formula
  double fixed_jnr_db = 10.0;      // fixed-awgn baseline action
  double fixed_rho = 1.0;

  int oracle_grid_m = 100;
  std::string out_dir = "out";

  ActionSpace action_space() const;
  HolderParams holder() const;  // from the scenario's snr_max / jnr_min
  std::vector<VictimProfile> profiles() const;
  std::vector<double> weights() const;

  // Shrinks horizon, packet length and the time-like victim/window
  // parameters jointly.
  void apply_scale(double scale);

  // Canonical key=value rendering; also the input to config_hash().
  std::string serialize() const;
  std::uint64_t config_hash() const;

  // Returns every violation found (empty means valid).
  std::vector<std::string> validate() const;
};

// Parses the flat `key = value` format with [section] headers. Unknown keys
// are errors. Throws std::runtime_error with the collected messages.
ExperimentConfig parse_config(const std::string& text);
ExperimentConfig load_config_file(const std::string& path);

}  // namespace jamlab
