// jamlab command line: run experiments, query the grid-search oracle, sweep
// the named presets and print the confidence-bound planner values.
//
// Exit status: 0 on success, 1 on configuration/validation errors, 2 on I/O
// errors.

#include <cstdio>
#include <filesystem>
#include <iostream>

#include <CLI11.hpp>

#include "jamlab/bounds.hpp"
#include "jamlab/experiment.hpp"
#include "jamlab/presets.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 1;
constexpr int kExitIo = 2;

jamlab::ExperimentConfig load(const std::string& config_path, const std::string& preset_name) {
  if (!preset_name.empty()) return jamlab::preset(preset_name);
  return jamlab::load_config_file(config_path);
}

void print_bounds(const jamlab::ExperimentConfig& cfg) {
  using namespace jamlab;
  const HolderParams holder = cfg.holder();
  const int n_mod = static_cast<int>(cfg.jammer_schemes.size());
  std::printf("holder: L = %.6g, alpha = %.2g, delta = %.2g\n", holder.constant_l,
              holder.exponent_alpha, holder.restriction_delta);
  std::printf("%-12s %-6s %-14s %-14s %-14s %-16s\n", "round_T", "M", "regret_curve",
              "one_step", "estimate", "cum_conf(0.1)");
  for (const RoundSpan& r : round_schedule(cfg.horizon)) {
    if (r.nominal < 4) continue;
    const int m = round_resolution(r.nominal, holder,
                                   cfg.algorithm == AlgorithmKind::JbElim
                                       ? InnerPolicyKind::UcbImproved
                                       : InnerPolicyKind::Ucb1,
                                   MetaOptions{cfg.fixed_m, cfg.oracle_grid_m});
    const BoundInputs inputs{r.nominal, holder, n_mod, m, 0.1, 0.0};
    std::printf("%-12lld %-6d %-14.6g %-14.6g %-14.6g %-16.6g\n",
                static_cast<long long>(r.nominal), m, regret_curve(inputs, r.nominal),
                one_step_delta(r.nominal, holder), estimate_delta(r.nominal, holder),
                cumulative_confidence(r.nominal, holder, 0.1));
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"physical-layer jamming bandit laboratory"};
  app.require_subcommand(1);

  std::string config_path;
  std::string preset_name;
  std::uint64_t seed = 0;
  bool seed_set = false;
  double scale = 1.0;
  std::string out_dir;
  int grid_m = 100;
  int threads = 0;

  auto* run = app.add_subcommand("run", "execute an experiment from a config file");
  run->add_option("--config", config_path, "experiment config file")->required();
  run->add_option("--seed", seed, "run a single seed instead of the configured set")
      ->each([&](const std::string&) { seed_set = true; });
  run->add_option("--scale", scale, "shrink horizon and packet length jointly (0, 1]");
  run->add_option("--out", out_dir, "output directory (overrides config)");
  run->add_option("--threads", threads, "max concurrent seeds (0 = hardware)");

  auto* oracle = app.add_subcommand("oracle", "expected-reward grid search for a config");
  oracle->add_option("--config", config_path, "experiment config file")->required();
  oracle->add_option("--grid-m", grid_m, "grid resolution per axis")->required();
  oracle->add_option("--scale", scale, "shrink horizon and packet length jointly (0, 1]");

  auto* sweep = app.add_subcommand("sweep", "run a named preset");
  sweep->add_option("--preset", preset_name, "preset name")->required();
  sweep->add_option("--scale", scale, "shrink horizon and packet length jointly (0, 1]");
  sweep->add_option("--out", out_dir, "output directory (overrides preset)");
  sweep->add_option("--seed", seed, "run a single seed")
      ->each([&](const std::string&) { seed_set = true; });
  sweep->add_option("--threads", threads, "max concurrent seeds (0 = hardware)");

  auto* bounds = app.add_subcommand("bounds", "print the confidence-bound planner values");
  bounds->add_option("--config", config_path, "experiment config file");
  bounds->add_option("--preset", preset_name, "preset name");
  bounds->add_option("--scale", scale, "shrink horizon jointly (0, 1]");

  auto* presets = app.add_subcommand("presets", "list the named presets");

  CLI11_PARSE(app, argc, argv);

  try {
    if (presets->parsed()) {
      for (const std::string& name : jamlab::preset_names()) std::printf("%s\n", name.c_str());
      return kExitOk;
    }
    if (bounds->parsed()) {
      if (config_path.empty() && preset_name.empty())
        throw jamlab::ConfigError("bounds: need --config or --preset");
      jamlab::ExperimentConfig cfg = load(config_path, preset_name);
      if (scale != 1.0) cfg.apply_scale(scale);
      print_bounds(cfg);
      return kExitOk;
    }
    if (oracle->parsed()) {
      jamlab::ExperimentConfig cfg = load(config_path, preset_name);
      if (scale != 1.0) cfg.apply_scale(scale);
      const jamlab::GridOracleResult res = jamlab::grid_oracle(cfg, grid_m);
      std::printf("arms: %zu\n", res.grid.size());
      const jamlab::JammerAction& best = res.grid.arms[res.best_arm];
      std::printf("best: scheme=%s jnr_db=%.6g rho=%.6g expected_reward=%.8g\n",
                  jamlab::to_string(best.scheme), jamlab::linear_to_db(best.jnr), best.rho,
                  res.best_reward);
      std::printf("scheme,jnr_db,rho,expected_reward\n");
      for (std::size_t i = 0; i < res.grid.size(); ++i) {
        const jamlab::JammerAction& a = res.grid.arms[i];
        std::printf("%s,%.10g,%.10g,%.10g\n", jamlab::to_string(a.scheme),
                    jamlab::linear_to_db(a.jnr), a.rho, res.expected_rewards[i]);
      }
      return kExitOk;
    }
    // run / sweep
    jamlab::ExperimentConfig cfg = load(config_path, preset_name);
    jamlab::RunOptions opts;
    opts.scale = scale;
    opts.max_threads = threads;
    if (seed_set) opts.single_seed = seed;
    if (!out_dir.empty()) opts.out_dir = out_dir;
    const jamlab::ExperimentResult result = jamlab::run_experiment(cfg, opts);
    std::printf("completed %zu seed(s); mean terminal reward %.6g; mean final regret %.6g\n",
                result.seed_results.size(), result.summary.mean_terminal_reward,
                result.summary.mean_final_regret);
    std::printf("outputs in %s\n",
                (opts.out_dir ? *opts.out_dir : cfg.out_dir).c_str());
    return kExitOk;
  } catch (const jamlab::ConfigError& e) {
    std::fprintf(stderr, "%s\n", e.what());
    return kExitConfig;
  } catch (const std::invalid_argument& e) {
    std::fprintf(stderr, "invalid argument: %s\n", e.what());
    return kExitConfig;
  } catch (const std::out_of_range& e) {
    std::fprintf(stderr, "%s\n", e.what());
    return kExitConfig;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitIo;
  }
}
