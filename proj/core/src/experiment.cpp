#include "jamlab/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <future>
#include <sstream>
#include <thread>

#include <json.hpp>

namespace jamlab {

namespace fs = std::filesystem;
using nlohmann::json;

const char* const kTraceCsvHeader = "t,scheme,jnr_db,rho,reward,per_est,ser_est,oracle_best,cum_regret";

namespace {

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

Environment make_env(const ExperimentConfig& cfg, std::uint64_t seed) {
  return Environment(cfg.profiles(), cfg.weights(), cfg.reward, cfg.fidelity,
                     cfg.packets_per_step, seed);
}

InnerPolicyKind inner_kind(const ExperimentConfig& cfg) {
  return cfg.algorithm == AlgorithmKind::JbElim ? InnerPolicyKind::UcbImproved
                                                : InnerPolicyKind::Ucb1;
}

MetaOptions meta_options(const ExperimentConfig& cfg) {
  MetaOptions opts;
  opts.fixed_m = cfg.fixed_m;
  opts.oracle_grid_m = cfg.oracle_grid_m;
  return opts;
}

struct RoundPlan {
  std::int64_t start = 1;
  std::int64_t length = 0;
  std::int64_t nominal = 1;
  int m = 1;
};

std::vector<RoundPlan> round_plan(const ExperimentConfig& cfg) {
  std::vector<RoundPlan> plan;
  const MetaOptions opts = meta_options(cfg);
  switch (cfg.algorithm) {
    case AlgorithmKind::JbUcb1:
    case AlgorithmKind::JbElim:
    case AlgorithmKind::JbDrifting: {
      const HolderParams holder = cfg.holder();
      for (const RoundSpan& r : round_schedule(cfg.horizon)) {
        RoundPlan p{r.start, r.length, r.nominal, 1};
        p.m = round_resolution(r.nominal, holder, inner_kind(cfg), opts);
        plan.push_back(p);
      }
      break;
    }
    case AlgorithmKind::EpsilonGreedy:
      plan.push_back({1, cfg.horizon, cfg.horizon, std::max(cfg.fixed_m, 1)});
      break;
    case AlgorithmKind::FixedAwgn:
      plan.push_back({1, cfg.horizon, cfg.horizon, 1});
      break;
  }
  return plan;
}

std::string action_string(const JammerAction& a) {
  std::ostringstream os;
  os << to_string(a.scheme) << "/" << fmt(linear_to_db(a.jnr)) << "dB/rho=" << fmt(a.rho);
  return os.str();
}

// Arm lookup keyed on rounded coordinates, tolerant to CSV round-trips.
struct ArmIndex {
  explicit ArmIndex(const ActionGrid& grid) : grid_(grid) {}
  std::optional<std::size_t> find(const JammerAction& a) const {
    for (std::size_t i = 0; i < grid_.arms.size(); ++i) {
      const JammerAction& g = grid_.arms[i];
      if (g.scheme == a.scheme && std::abs(g.jnr - a.jnr) <= 1e-6 * std::max(1.0, g.jnr) &&
          std::abs(g.rho - a.rho) <= 1e-9)
        return i;
    }
    return std::nullopt;
  }
  const ActionGrid& grid_;
};

void finalize_seed_result(const ExperimentConfig& cfg, SeedResult& res) {
  // Rebuild per-round pulls when the trace was loaded from disk.
  if (res.trace.rounds.empty()) {
    for (const RoundPlan& p : round_plan(cfg)) {
      RoundRecord rec;
      rec.start_t = p.start;
      rec.length = p.length;
      rec.m = p.m;
      const ActionGrid grid = ActionGrid::build(cfg.action_space(), p.m);
      rec.arm_count = grid.size();
      rec.pulls.assign(grid.size(), 0);
      ArmIndex index(grid);
      for (std::int64_t t = p.start; t < p.start + p.length; ++t) {
        const TraceRow& row = res.trace.rows.at(static_cast<std::size_t>(t - 1));
        if (auto i = index.find(row.action)) rec.pulls[*i] += 1;
      }
      res.trace.rounds.push_back(std::move(rec));
    }
  }
  const RoundRecord* term = res.trace.terminal_round();
  if (term == nullptr) return;
  res.terminal_m = term->m;
  const ActionGrid grid = ActionGrid::build(cfg.action_space(), term->m);
  std::size_t modal = 0;
  for (std::size_t i = 1; i < term->pulls.size(); ++i)
    if (term->pulls[i] > term->pulls[modal]) modal = i;
  if (cfg.algorithm == AlgorithmKind::FixedAwgn)
    res.terminal_modal_arm = {Scheme::AwgnNoise, db_to_linear(cfg.fixed_jnr_db), cfg.fixed_rho};
  else
    res.terminal_modal_arm = grid.arms.at(modal);
  double sum = 0.0;
  for (std::int64_t t = term->start_t; t < term->start_t + term->length; ++t)
    sum += res.trace.rows.at(static_cast<std::size_t>(t - 1)).reward;
  res.terminal_mean_reward = term->length > 0 ? sum / static_cast<double>(term->length) : 0.0;
  res.final_cumulative_regret = res.trace.rows.back().cumulative_regret;
}

std::vector<TraceRow> parse_trace_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open trace file: " + path);
  std::string line;
  std::vector<TraceRow> rows;
  bool first = true;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (first) {
      first = false;
      if (line != kTraceCsvHeader) throw std::runtime_error("unexpected trace header in " + path);
      continue;
    }
    std::stringstream ss(line);
    std::string tok;
    TraceRow row;
    std::getline(ss, tok, ',');
    row.t = std::stoll(tok);
    std::getline(ss, tok, ',');
    const auto scheme = scheme_from_string(tok);
    if (!scheme) throw std::runtime_error("bad scheme in trace: " + tok);
    row.action.scheme = *scheme;
    std::getline(ss, tok, ',');
    row.action.jnr = db_to_linear(std::stod(tok));
    std::getline(ss, tok, ',');
    row.action.rho = std::stod(tok);
    std::getline(ss, tok, ',');
    row.reward = std::stod(tok);
    std::getline(ss, tok, ',');
    row.per_estimate = std::stod(tok);
    std::getline(ss, tok, ',');
    row.ser_estimate = std::stod(tok);
    std::getline(ss, tok, ',');
    row.oracle_best = std::stod(tok);
    std::getline(ss, tok, ',');
    row.cumulative_regret = std::stod(tok);
    rows.push_back(row);
  }
  return rows;
}

bool victims_stationary(const ExperimentConfig& cfg) {
  for (const auto& v : cfg.victims)
    if (v.policy.kind == VictimPolicy::Kind::Adaptive ||
        v.policy.kind == VictimPolicy::Kind::Periodic)
      return false;
  return true;
}

}  // namespace

std::string trace_row_csv(const TraceRow& row) {
  std::ostringstream os;
  os << row.t << ',' << to_string(row.action.scheme) << ',' << fmt(linear_to_db(row.action.jnr))
     << ',' << fmt(row.action.rho) << ',' << fmt(row.reward) << ',' << fmt(row.per_estimate)
     << ',' << fmt(row.ser_estimate) << ',' << fmt(row.oracle_best) << ','
     << fmt(row.cumulative_regret);
  return os.str();
}

void write_trace_csv(const std::string& path, const RunTrace& trace) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write trace file: " + path);
  out << kTraceCsvHeader << '\n';
  for (const TraceRow& row : trace.rows) out << trace_row_csv(row) << '\n';
  if (!out) throw std::runtime_error("write failed: " + path);
}

GridOracleResult grid_oracle(const ExperimentConfig& config, int grid_m) {
  if (grid_m < 2) throw std::invalid_argument("grid_oracle: grid_m must be >= 2");
  GridOracleResult res;
  res.grid = ActionGrid::build(config.action_space(), grid_m);
  Environment env = make_env(config, config.seed_base);
  res.expected_rewards.reserve(res.grid.size());
  for (const JammerAction& a : res.grid.arms) res.expected_rewards.push_back(env.expected_reward(a));
  res.best_arm = 0;
  for (std::size_t i = 1; i < res.expected_rewards.size(); ++i)
    if (res.expected_rewards[i] > res.expected_rewards[res.best_arm]) res.best_arm = i;
  res.best_reward = res.expected_rewards.empty() ? 0.0 : res.expected_rewards[res.best_arm];
  return res;
}

SeedResult run_single(const ExperimentConfig& config, std::uint64_t seed) {
  SeedResult res;
  res.seed = seed;
  Environment env = make_env(config, seed);
  const ActionSpace space = config.action_space();
  const HolderParams holder = config.holder();
  const MetaOptions opts = meta_options(config);
  switch (config.algorithm) {
    case AlgorithmKind::JbUcb1:
      res.trace = jb_run(env, config.horizon, holder, InnerPolicyKind::Ucb1, space, seed, opts);
      break;
    case AlgorithmKind::JbElim:
      res.trace =
          jb_run(env, config.horizon, holder, InnerPolicyKind::UcbImproved, space, seed, opts);
      break;
    case AlgorithmKind::JbDrifting:
      res.trace =
          jb_drifting_run(env, config.horizon, holder, config.window_w, space, seed, opts);
      break;
    case AlgorithmKind::EpsilonGreedy:
      res.trace = epsilon_greedy_run(env, config.horizon, std::max(config.fixed_m, 1),
                                     config.epsilon0, space, seed, opts);
      break;
    case AlgorithmKind::FixedAwgn: {
      const JammerAction a{Scheme::AwgnNoise, db_to_linear(config.fixed_jnr_db),
                           config.fixed_rho};
      res.trace = fixed_action_run(env, config.horizon, a, space, seed, opts);
      break;
    }
  }
  finalize_seed_result(config, res);
  return res;
}

namespace {

ExperimentSummary build_summary(const ExperimentConfig& cfg,
                                const std::vector<SeedResult>& seeds) {
  ExperimentSummary s;
  s.name = cfg.name;
  s.config_hash = cfg.config_hash();
  const SeedResult& first = seeds.front();

  double term_sum = 0.0, regret_sum = 0.0;
  for (const SeedResult& r : seeds) {
    s.seeds.push_back(r.seed);
    s.terminal_modal_arms.push_back(action_string(r.terminal_modal_arm));
    term_sum += r.terminal_mean_reward;
    regret_sum += r.final_cumulative_regret;
  }
  s.mean_terminal_reward = term_sum / static_cast<double>(seeds.size());
  s.mean_final_regret = regret_sum / static_cast<double>(seeds.size());

  const BoundInputs bounds{cfg.horizon, cfg.holder(),
                           static_cast<int>(cfg.jammer_schemes.size()), first.terminal_m, 0.1,
                           0.0};
  for (const RoundRecord& round : first.trace.rounds) {
    const std::int64_t end = round.start_t + round.length - 1;
    s.round_boundaries.push_back(end);
    double acc = 0.0;
    for (const SeedResult& r : seeds)
      acc += r.trace.rows.at(static_cast<std::size_t>(end - 1)).cumulative_regret;
    s.mean_regret_at_boundaries.push_back(acc / static_cast<double>(seeds.size()));
    s.regret_curve_overlay.push_back(end >= 2 ? regret_curve(bounds, end) : 0.0);
  }

  // Log-log slope of the mean cumulative regret across the terminal round.
  const RoundRecord* term = first.trace.terminal_round();
  if (term != nullptr) {
    const std::int64_t t2 = term->start_t + term->length - 1;
    const std::int64_t t1 = std::max<std::int64_t>(1, term->start_t - 1);
    if (t2 > t1) {
      double r1 = 0.0, r2 = 0.0;
      for (const SeedResult& r : seeds) {
        r1 += r.trace.rows.at(static_cast<std::size_t>(t1 - 1)).cumulative_regret;
        r2 += r.trace.rows.at(static_cast<std::size_t>(t2 - 1)).cumulative_regret;
      }
      if (r1 > 0.0 && r2 > 0.0)
        s.regret_slope_last_two_rounds =
            std::log(r2 / r1) / std::log(static_cast<double>(t2) / static_cast<double>(t1));
    }
    if (term->length >= 2) {
      const HolderParams holder = cfg.holder();
      s.terminal_one_step_delta = one_step_delta(term->length, holder);
      s.terminal_estimate_delta = estimate_delta(term->length, holder);
      if (term->length >= 3)
        s.terminal_cumulative_confidence = cumulative_confidence(term->length, holder, 0.1);

      if (victims_stationary(cfg) && cfg.algorithm != AlgorithmKind::FixedAwgn) {
        const ActionGrid grid = ActionGrid::build(cfg.action_space(), term->m);
        Environment oracle_env = make_env(cfg, cfg.seed_base);
        std::vector<double> means;
        means.reserve(grid.size());
        for (const JammerAction& a : grid.arms) means.push_back(oracle_env.expected_reward(a));
        ArmIndex index(grid);
        std::vector<std::size_t> chosen;
        chosen.reserve(static_cast<std::size_t>(term->length));
        for (std::int64_t t = term->start_t; t < term->start_t + term->length; ++t) {
          const TraceRow& row = first.trace.rows.at(static_cast<std::size_t>(t - 1));
          if (auto i = index.find(row.action)) chosen.push_back(*i);
        }
        const double delta = s.terminal_one_step_delta;
        s.terminal_audit =
            suboptimality_audit(chosen, means, delta / 4.0, delta,
                                static_cast<int>(cfg.jammer_schemes.size()), term->m);
      }
    }
  }
  return s;
}

}  // namespace

std::string summary_json(const ExperimentConfig& config, const ExperimentResult& result) {
  const ExperimentSummary& s = result.summary;
  json j;
  j["name"] = s.name;
  j["config_hash"] = s.config_hash;
  j["algorithm"] = to_string(config.algorithm);
  j["horizon"] = config.horizon;
  j["seeds"] = s.seeds;
  j["terminal_modal_arms"] = s.terminal_modal_arms;
  j["mean_terminal_reward"] = s.mean_terminal_reward;
  j["mean_final_regret"] = s.mean_final_regret;
  j["regret_slope_last_two_rounds"] = s.regret_slope_last_two_rounds;
  j["round_boundaries"] = s.round_boundaries;
  j["mean_regret_at_boundaries"] = s.mean_regret_at_boundaries;
  j["bounds"]["regret_curve"] = s.regret_curve_overlay;
  j["bounds"]["one_step_delta"] = s.terminal_one_step_delta;
  j["bounds"]["estimate_delta"] = s.terminal_estimate_delta;
  j["bounds"]["cumulative_confidence_eps_0.1"] = s.terminal_cumulative_confidence;
  j["audit"]["gaps"] = s.terminal_audit.gaps;
  j["audit"]["above_threshold"] = s.terminal_audit.above_threshold;
  j["audit"]["undersampled_choices"] = s.terminal_audit.undersampled_choices;
  j["audit"]["expectation_bound"] = s.terminal_audit.expectation_bound;
  j["audit"]["exceed_events"] = s.terminal_audit.exceed_events;
  j["audit"]["exceed_probability_budget"] = s.terminal_audit.exceed_probability_budget;
  j["per_seed"] = json::array();
  for (const SeedResult& r : result.seed_results) {
    json e;
    e["seed"] = r.seed;
    e["terminal_modal_arm"] = action_string(r.terminal_modal_arm);
    e["terminal_m"] = r.terminal_m;
    e["terminal_mean_reward"] = r.terminal_mean_reward;
    e["final_cumulative_regret"] = r.final_cumulative_regret;
    j["per_seed"].push_back(e);
  }
  return j.dump(2);
}

ExperimentResult run_experiment(const ExperimentConfig& config, const RunOptions& options) {
  ExperimentConfig cfg = config;
  if (options.scale != 1.0) cfg.apply_scale(options.scale);
  if (options.out_dir) cfg.out_dir = *options.out_dir;
  const auto errors = cfg.validate();
  if (!errors.empty()) {
    std::string joined = "configuration invalid:";
    for (const auto& e : errors) joined += "\n  - " + e;
    throw ConfigError(joined);
  }

  std::vector<std::uint64_t> seeds;
  if (options.single_seed) {
    seeds.push_back(*options.single_seed);
  } else {
    for (int i = 0; i < cfg.seeds; ++i) seeds.push_back(cfg.seed_base + static_cast<std::uint64_t>(i));
  }

  const fs::path out_root(cfg.out_dir);
  if (options.write_outputs) {
    std::error_code ec;
    fs::create_directories(out_root, ec);
    if (ec) throw std::runtime_error("cannot create output directory: " + out_root.string());
  }

  const auto run_one = [&](std::uint64_t seed) -> SeedResult {
    if (!options.write_outputs) return run_single(cfg, seed);

    const fs::path dir = out_root / ("seed_" + std::to_string(seed));
    const fs::path trace_path = dir / "trace.csv";
    const fs::path meta_path = dir / "meta.json";
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw std::runtime_error("cannot create output directory: " + dir.string());

    std::int64_t rows_done = 0;
    bool hash_ok = false;
    if (fs::exists(meta_path) && fs::exists(trace_path)) {
      try {
        std::ifstream mf(meta_path);
        json meta = json::parse(mf);
        hash_ok = meta.value("config_hash", std::uint64_t{0}) == cfg.config_hash();
      } catch (...) {
        hash_ok = false;
      }
      if (hash_ok) {
        std::ifstream tf(trace_path);
        std::string line;
        std::int64_t count = -1;  // header
        while (std::getline(tf, line))
          if (!line.empty()) ++count;
        rows_done = std::max<std::int64_t>(count, 0);
      }
    }

    SeedResult res;
    if (hash_ok && rows_done >= cfg.horizon) {
      res.seed = seed;
      res.trace.rows = parse_trace_csv(trace_path.string());
      finalize_seed_result(cfg, res);
    } else {
      res = run_single(cfg, seed);
      if (!hash_ok || rows_done == 0) {
        write_trace_csv(trace_path.string(), res.trace);
      } else {
        // Resume: keep the rows already on disk, append the regenerated
        // remainder (the run is deterministic in (config, seed)).
        std::ofstream out(trace_path, std::ios::app);
        if (!out) throw std::runtime_error("cannot append to " + trace_path.string());
        for (const TraceRow& row : res.trace.rows)
          if (row.t > rows_done) out << trace_row_csv(row) << '\n';
        if (!out) throw std::runtime_error("write failed: " + trace_path.string());
      }
      json meta;
      meta["config_hash"] = cfg.config_hash();
      meta["seed"] = seed;
      meta["rows"] = cfg.horizon;
      std::ofstream mf(meta_path, std::ios::trunc);
      mf << meta.dump(2) << '\n';
      if (!mf) throw std::runtime_error("write failed: " + meta_path.string());

      // Downsampled companion for plotting.
      const std::int64_t stride =
          std::max<std::int64_t>(1, cfg.horizon / 2000);
      std::ofstream pf(dir / "plot.csv", std::ios::trunc);
      pf << "t,reward,oracle_best,cum_regret\n";
      for (const TraceRow& row : res.trace.rows)
        if (row.t % stride == 0 || row.t == cfg.horizon)
          pf << row.t << ',' << fmt(row.reward) << ',' << fmt(row.oracle_best) << ','
             << fmt(row.cumulative_regret) << '\n';
      if (!pf) throw std::runtime_error("write failed: plot.csv");
    }
    return res;
  };

  ExperimentResult result;
  result.seed_results.resize(seeds.size());
  const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
  const std::size_t pool = options.max_threads > 0
                               ? static_cast<std::size_t>(options.max_threads)
                               : static_cast<std::size_t>(hw);
  std::size_t next = 0;
  while (next < seeds.size()) {
    const std::size_t batch = std::min(pool, seeds.size() - next);
    std::vector<std::future<SeedResult>> futs;
    for (std::size_t k = 0; k < batch; ++k)
      futs.push_back(std::async(std::launch::async, run_one, seeds[next + k]));
    for (std::size_t k = 0; k < batch; ++k) result.seed_results[next + k] = futs[k].get();
    next += batch;
  }

  result.summary = build_summary(cfg, result.seed_results);
  if (options.write_outputs) {
    std::ofstream sf(out_root / "summary.json", std::ios::trunc);
    sf << summary_json(cfg, result) << '\n';
    if (!sf) throw std::runtime_error("write failed: summary.json");
  }
  return result;
}

}  // namespace jamlab
