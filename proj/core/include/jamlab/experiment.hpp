#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "jamlab/bounds.hpp"
#include "jamlab/config.hpp"
#include "jamlab/meta.hpp"

namespace jamlab {

struct GridOracleResult {
  ActionGrid grid;
  std::vector<double> expected_rewards;
  std::size_t best_arm = 0;
  double best_reward = 0.0;
};

// Expected reward of every grid arm under the configured victims (i.i.d.
// victims are mixed over their strategy distribution); argmax ties break
// toward the lowest arm id.
GridOracleResult grid_oracle(const ExperimentConfig& config, int grid_m);

struct SeedResult {
  std::uint64_t seed = 0;
  RunTrace trace;
  JammerAction terminal_modal_arm;
  int terminal_m = 1;
  double terminal_mean_reward = 0.0;
  double final_cumulative_regret = 0.0;
};

struct ExperimentSummary {
  std::string name;
  std::uint64_t config_hash = 0;
  std::vector<std::uint64_t> seeds;
  std::vector<std::string> terminal_modal_arms;  // one per seed, "scheme/jnr_db/rho"
  double mean_terminal_reward = 0.0;
  double mean_final_regret = 0.0;
  double regret_slope_last_two_rounds = 0.0;  // log-log, from mean regret
  std::vector<std::int64_t> round_boundaries;
  std::vector<double> mean_regret_at_boundaries;
  std::vector<double> regret_curve_overlay;  // bound shape at the same boundaries
  double terminal_one_step_delta = 0.0;
  double terminal_estimate_delta = 0.0;
  double terminal_cumulative_confidence = 0.0;  // at epsilon = 0.1
  SuboptimalityAudit terminal_audit;  // audited on seed 0's terminal round
};

struct ExperimentResult {
  std::vector<SeedResult> seed_results;
  ExperimentSummary summary;
};

struct RunOptions {
  std::optional<std::uint64_t> single_seed;  // run just this seed
  double scale = 1.0;
  std::optional<std::string> out_dir;  // overrides config
  bool write_outputs = true;
  int max_threads = 0;  // 0: hardware default
};

// Executes the configured algorithm per seed (concurrently), writes per-seed
// trace.csv and a summary.json. Seeds whose outputs already exist and match
// the config hash are resumed (completed rows are kept, the remainder is
// regenerated deterministically) or skipped when complete.
ExperimentResult run_experiment(const ExperimentConfig& config, const RunOptions& options = {});

// One run, no file output.
SeedResult run_single(const ExperimentConfig& config, std::uint64_t seed);

// Exact serialized forms of the trace rows; the header is part of the file
// format contract.
extern const char* const kTraceCsvHeader;
std::string trace_row_csv(const TraceRow& row);

void write_trace_csv(const std::string& path, const RunTrace& trace);
std::string summary_json(const ExperimentConfig& config, const ExperimentResult& result);

}  // namespace jamlab
