#include "jamlab/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace jamlab {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

std::vector<Scheme> parse_schemes(const std::string& s, std::vector<std::string>& errors,
                                  const std::string& ctx) {
  std::vector<Scheme> out;
  for (const std::string& tok : split_list(s)) {
    if (auto sch = scheme_from_string(tok))
      out.push_back(*sch);
    else
      errors.push_back(ctx + ": unknown scheme '" + tok + "'");
  }
  return out;
}

}  // namespace

const char* to_string(AlgorithmKind k) {
  switch (k) {
    case AlgorithmKind::JbUcb1: return "jb-ucb1";
    case AlgorithmKind::JbElim: return "jb-elim";
    case AlgorithmKind::JbDrifting: return "jb-drifting";
    case AlgorithmKind::EpsilonGreedy: return "epsilon-greedy";
    case AlgorithmKind::FixedAwgn: return "fixed-awgn";
  }
  return "?";
}

ActionSpace ExperimentConfig::action_space() const {
  ActionSpace space;
  space.schemes = jammer_schemes;
  space.jnr_min = db_to_linear(jnr_db_min);
  space.jnr_max = db_to_linear(jnr_db_max);
  space.arm_budget = arm_budget;
  return space;
}

HolderParams ExperimentConfig::holder() const {
  double snr_max_db = 0.0;
  for (const auto& v : victims)
    snr_max_db = std::max(snr_max_db, std::max(v.policy.snr_db_min, v.policy.snr_db_max));
  return holder_constants(db_to_linear(snr_max_db), db_to_linear(jnr_db_min));
}

std::vector<VictimProfile> ExperimentConfig::profiles() const {
  std::vector<VictimProfile> out;
  for (const auto& v : victims)
    out.push_back(VictimProfile{v.policy, v.n_symbols, v.rule, v.phase_mode});
  return out;
}

std::vector<double> ExperimentConfig::weights() const {
  std::vector<double> w;
  bool any = false;
  for (const auto& v : victims) any = any || v.weight >= 0.0;
  if (!any) return {};
  for (const auto& v : victims) w.push_back(std::max(v.weight, 0.0));
  return w;
}

void ExperimentConfig::apply_scale(double scale) {
  if (!(scale > 0.0) || scale > 1.0)
    throw std::invalid_argument("scale must lie in (0, 1]");
  if (scale == 1.0) return;
  const auto scale_steps = [scale](std::int64_t v) {
    return std::max<std::int64_t>(1, std::llround(static_cast<double>(v) * scale));
  };
  horizon = scale_steps(horizon);
  window_w = std::max<std::int64_t>(2, (scale_steps(window_w) / 2) * 2);
  for (auto& v : victims) {
    v.n_symbols = scale_steps(v.n_symbols);
    if (v.policy.period > 0) v.policy.period = scale_steps(v.policy.period);
    if (v.policy.adapt_window > 0) v.policy.adapt_window = scale_steps(v.policy.adapt_window);
  }
}

std::string ExperimentConfig::serialize() const {
  std::ostringstream os;
  os << "[scenario]\n";
  os << "name = " << name << "\n";
  os << "horizon = " << horizon << "\n";
  os << "seeds = " << seeds << "\n";
  os << "seed_base = " << seed_base << "\n";
  os << "fidelity = " << (fidelity == Fidelity::Analytic ? "analytic" : "symbol") << "\n";
  os << "packets_per_step = " << packets_per_step << "\n";
  for (std::size_t i = 0; i < victims.size(); ++i) {
    const auto& v = victims[i];
    if (i == 0)
      os << "[victim]\n";
    else
      os << "[victim." << (i + 1) << "]\n";
    const auto& p = v.policy;
    switch (p.kind) {
      case VictimPolicy::Kind::Static: os << "policy = static\n"; break;
      case VictimPolicy::Kind::Iid: os << "policy = iid\n"; break;
      case VictimPolicy::Kind::Adaptive: os << "policy = adaptive\n"; break;
      case VictimPolicy::Kind::Periodic: os << "policy = periodic\n"; break;
    }
    if (p.kind == VictimPolicy::Kind::Iid) {
      os << "schemes =";
      for (std::size_t k = 0; k < p.scheme_set.size(); ++k)
        os << (k ? "," : " ") << to_string(p.scheme_set[k]);
      os << "\n";
    } else {
      os << "modulation = " << to_string(p.scheme) << "\n";
    }
    os << "snr_db_min = " << p.snr_db_min << "\n";
    os << "snr_db_max = " << p.snr_db_max << "\n";
    if (p.period > 0) os << "period = " << p.period << "\n";
    if (p.adapt_window > 0) {
      os << "adapt_window = " << p.adapt_window << "\n";
      os << "trigger = " << p.trigger << "\n";
      os << "adapt_rule = "
         << (p.adapt_rule == VictimPolicy::AdaptRule::UniformRedraw ? "redraw" : "step") << "\n";
      os << "step_db = " << p.step_db << "\n";
    }
    if (v.weight >= 0.0) os << "weight = " << v.weight << "\n";
    os << "n_symbols = " << v.n_symbols << "\n";
    os << "error_rule = " << (v.rule.kind == PacketRule::Kind::AnyError ? "any" : "threshold")
       << "\n";
    if (v.rule.kind == PacketRule::Kind::Threshold)
      os << "threshold_fraction = " << v.rule.fraction << "\n";
    os << "phase = " << (v.phase_mode == PhaseMode::Coherent ? "coherent" : "random") << "\n";
  }
  os << "[jammer]\n";
  os << "schemes =";
  for (std::size_t k = 0; k < jammer_schemes.size(); ++k)
    os << (k ? "," : " ") << to_string(jammer_schemes[k]);
  os << "\n";
  os << "jnr_db_min = " << jnr_db_min << "\n";
  os << "jnr_db_max = " << jnr_db_max << "\n";
  switch (reward.kind) {
    case RewardKind::RawSer: os << "reward = raw-ser\n"; break;
    case RewardKind::RawPer: os << "reward = raw-per\n"; break;
    case RewardKind::ThresholdPerOverJnr: os << "reward = thresholded-per\n"; break;
    case RewardKind::ThresholdSerOverJnr: os << "reward = thresholded-ser\n"; break;
  }
  if (reward.kind == RewardKind::ThresholdPerOverJnr ||
      reward.kind == RewardKind::ThresholdSerOverJnr)
    os << "target = " << reward.target << "\n";
  os << "arm_budget = " << arm_budget << "\n";
  os << "[algorithm]\n";
  os << "kind = " << to_string(algorithm) << "\n";
  if (algorithm == AlgorithmKind::JbDrifting) os << "window_w = " << window_w << "\n";
  if (algorithm == AlgorithmKind::EpsilonGreedy) os << "epsilon0 = " << epsilon0 << "\n";
  if (fixed_m > 0) os << "fixed_m = " << fixed_m << "\n";
  if (algorithm == AlgorithmKind::FixedAwgn) {
    os << "fixed_jnr_db = " << fixed_jnr_db << "\n";
    os << "fixed_rho = " << fixed_rho << "\n";
  }
  os << "[oracle]\n";
  os << "grid_m = " << oracle_grid_m << "\n";
  os << "[output]\n";
  os << "dir = " << out_dir << "\n";
  return os.str();
}

std::uint64_t ExperimentConfig::config_hash() const {
  const std::string s = serialize();
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  return h;
}

std::vector<std::string> ExperimentConfig::validate() const {
  std::vector<std::string> errors;
  if (horizon < 1) errors.push_back("scenario: horizon must be >= 1");
  if (seeds < 1) errors.push_back("scenario: seeds must be >= 1");
  if (packets_per_step < 1) errors.push_back("scenario: packets_per_step must be >= 1");
  if (victims.empty()) errors.push_back("victim: at least one victim profile is required");
  double wsum = 0.0;
  bool weighted = false;
  for (std::size_t i = 0; i < victims.size(); ++i) {
    const auto& v = victims[i];
    const std::string ctx = "victim " + std::to_string(i + 1);
    if (v.n_symbols < 1) errors.push_back(ctx + ": n_symbols must be >= 1");
    if (v.policy.snr_db_min > v.policy.snr_db_max)
      errors.push_back(ctx + ": snr_db_min exceeds snr_db_max");
    if (v.policy.kind == VictimPolicy::Kind::Iid) {
      if (v.policy.scheme_set.empty()) errors.push_back(ctx + ": iid policy needs schemes");
      for (Scheme s : v.policy.scheme_set)
        if (s == Scheme::AwgnNoise) errors.push_back(ctx + ": victims cannot transmit noise");
    } else if (v.policy.scheme == Scheme::AwgnNoise) {
      errors.push_back(ctx + ": victims cannot transmit noise");
    }
    if (v.policy.kind == VictimPolicy::Kind::Periodic && v.policy.period < 1)
      errors.push_back(ctx + ": periodic policy needs period >= 1");
    if (v.policy.kind == VictimPolicy::Kind::Adaptive && v.policy.adapt_window < 1)
      errors.push_back(ctx + ": adaptive policy needs adapt_window >= 1");
    if (v.rule.kind == PacketRule::Kind::Threshold &&
        (v.rule.fraction <= 0.0 || v.rule.fraction > 1.0))
      errors.push_back(ctx + ": threshold_fraction must lie in (0, 1]");
    if (v.weight >= 0.0) weighted = true;
    wsum += std::max(v.weight, 0.0);
  }
  if (weighted && std::abs(wsum - 1.0) > 1e-9)
    errors.push_back("victim: explicit weights must sum to 1");
  if (jammer_schemes.empty()) errors.push_back("jammer: scheme set must be non-empty");
  if (jnr_db_min < 0.0)
    errors.push_back("jammer: jnr_db_min must be >= 0 dB so rewards stay in [0, 1]");
  if (jnr_db_min > jnr_db_max) errors.push_back("jammer: jnr_db_min exceeds jnr_db_max");
  if ((reward.kind == RewardKind::ThresholdPerOverJnr ||
       reward.kind == RewardKind::ThresholdSerOverJnr) &&
      (reward.target <= 0.0 || reward.target >= 1.0))
    errors.push_back("jammer: thresholded rewards need target in (0, 1)");
  if (arm_budget < 1) errors.push_back("jammer: arm_budget must be >= 1");
  if (algorithm == AlgorithmKind::JbDrifting && (window_w < 2 || window_w % 2 != 0))
    errors.push_back("algorithm: window_w must be even and >= 2");
  if (algorithm == AlgorithmKind::EpsilonGreedy) {
    if (!(epsilon0 > 0.0) || epsilon0 >= 1.0)
      errors.push_back("algorithm: epsilon0 must lie in (0, 1)");
    if (fixed_m < 1) errors.push_back("algorithm: epsilon-greedy needs fixed_m >= 1");
  }
  if (algorithm == AlgorithmKind::FixedAwgn &&
      (!(fixed_rho > 0.0) || fixed_rho > 1.0))
    errors.push_back("algorithm: fixed_rho must lie in (0, 1]");
  if (oracle_grid_m < 2) errors.push_back("oracle: grid_m must be >= 2");
  if (out_dir.empty()) errors.push_back("output: dir must be non-empty");
  return errors;
}

ExperimentConfig parse_config(const std::string& text) {
  ExperimentConfig cfg;
  cfg.victims.clear();
  std::vector<std::string> errors;
  std::string section;
  std::size_t victim_idx = 0;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;

  const auto ensure_victim = [&]() -> VictimConfig& {
    while (cfg.victims.size() <= victim_idx) cfg.victims.push_back(VictimConfig{});
    return cfg.victims[victim_idx];
  };

  while (std::getline(in, line)) {
    ++lineno;
    const auto cut = line.find_first_of("#;");
    if (cut != std::string::npos) line = line.substr(0, cut);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') {
        errors.push_back("line " + std::to_string(lineno) + ": malformed section header");
        continue;
      }
      section = trim(line.substr(1, line.size() - 2));
      if (section.rfind("victim", 0) == 0) {
        const auto dot = section.find('.');
        victim_idx = dot == std::string::npos
                         ? 0
                         : static_cast<std::size_t>(std::stoul(section.substr(dot + 1))) - 1;
        section = "victim";
        ensure_victim();
      }
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      errors.push_back("line " + std::to_string(lineno) + ": expected key = value");
      continue;
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    const std::string ctx = section + "." + key;

    const auto as_double = [&](double& dst) {
      try {
        dst = std::stod(value);
      } catch (...) {
        errors.push_back(ctx + ": expected a number, got '" + value + "'");
      }
    };
    const auto as_int = [&](auto& dst) {
      try {
        dst = static_cast<std::remove_reference_t<decltype(dst)>>(std::stoll(value));
      } catch (...) {
        errors.push_back(ctx + ": expected an integer, got '" + value + "'");
      }
    };

    if (section == "scenario") {
      if (key == "name") cfg.name = value;
      else if (key == "horizon") as_int(cfg.horizon);
      else if (key == "seeds") as_int(cfg.seeds);
      else if (key == "seed_base") as_int(cfg.seed_base);
      else if (key == "packets_per_step") as_int(cfg.packets_per_step);
      else if (key == "fidelity") {
        if (value == "analytic") cfg.fidelity = Fidelity::Analytic;
        else if (value == "symbol") cfg.fidelity = Fidelity::Symbol;
        else errors.push_back(ctx + ": expected analytic|symbol");
      } else errors.push_back(ctx + ": unknown key");
    } else if (section == "victim") {
      VictimConfig& v = ensure_victim();
      if (key == "policy") {
        if (value == "static") v.policy.kind = VictimPolicy::Kind::Static;
        else if (value == "iid") v.policy.kind = VictimPolicy::Kind::Iid;
        else if (value == "adaptive") v.policy.kind = VictimPolicy::Kind::Adaptive;
        else if (value == "periodic") v.policy.kind = VictimPolicy::Kind::Periodic;
        else errors.push_back(ctx + ": expected static|iid|adaptive|periodic");
      } else if (key == "modulation") {
        if (auto s = scheme_from_string(value)) v.policy.scheme = *s;
        else errors.push_back(ctx + ": unknown scheme '" + value + "'");
      } else if (key == "schemes") {
        v.policy.scheme_set = parse_schemes(value, errors, ctx);
      } else if (key == "snr_db") {
        double d = 0;
        as_double(d);
        v.policy.snr_db_min = v.policy.snr_db_max = d;
      } else if (key == "snr_db_min") as_double(v.policy.snr_db_min);
      else if (key == "snr_db_max") as_double(v.policy.snr_db_max);
      else if (key == "period") as_int(v.policy.period);
      else if (key == "adapt_window") as_int(v.policy.adapt_window);
      else if (key == "trigger") as_double(v.policy.trigger);
      else if (key == "step_db") as_double(v.policy.step_db);
      else if (key == "adapt_rule") {
        if (value == "redraw") v.policy.adapt_rule = VictimPolicy::AdaptRule::UniformRedraw;
        else if (value == "step") v.policy.adapt_rule = VictimPolicy::AdaptRule::Step;
        else errors.push_back(ctx + ": expected redraw|step");
      } else if (key == "weight") as_double(v.weight);
      else if (key == "n_symbols") as_int(v.n_symbols);
      else if (key == "error_rule") {
        if (value == "any") v.rule = PacketRule::any_error();
        else if (value == "threshold") v.rule.kind = PacketRule::Kind::Threshold;
        else errors.push_back(ctx + ": expected any|threshold");
      } else if (key == "threshold_fraction") {
        v.rule.kind = PacketRule::Kind::Threshold;
        as_double(v.rule.fraction);
      } else if (key == "phase") {
        if (value == "coherent") v.phase_mode = PhaseMode::Coherent;
        else if (value == "random") v.phase_mode = PhaseMode::RandomPerPacket;
        else errors.push_back(ctx + ": expected coherent|random");
      } else errors.push_back(ctx + ": unknown key");
    } else if (section == "jammer") {
      if (key == "schemes") cfg.jammer_schemes = parse_schemes(value, errors, ctx);
      else if (key == "jnr_db_min") as_double(cfg.jnr_db_min);
      else if (key == "jnr_db_max") as_double(cfg.jnr_db_max);
      else if (key == "target") as_double(cfg.reward.target);
      else if (key == "arm_budget") as_int(cfg.arm_budget);
      else if (key == "reward") {
        if (value == "raw-ser") cfg.reward.kind = RewardKind::RawSer;
        else if (value == "raw-per") cfg.reward.kind = RewardKind::RawPer;
        else if (value == "thresholded-per") cfg.reward.kind = RewardKind::ThresholdPerOverJnr;
        else if (value == "thresholded-ser") cfg.reward.kind = RewardKind::ThresholdSerOverJnr;
        else errors.push_back(ctx + ": expected raw-ser|raw-per|thresholded-per|thresholded-ser");
      } else errors.push_back(ctx + ": unknown key");
    } else if (section == "algorithm") {
      if (key == "kind") {
        if (value == "jb-ucb1") cfg.algorithm = AlgorithmKind::JbUcb1;
        else if (value == "jb-elim") cfg.algorithm = AlgorithmKind::JbElim;
        else if (value == "jb-drifting") cfg.algorithm = AlgorithmKind::JbDrifting;
        else if (value == "epsilon-greedy") cfg.algorithm = AlgorithmKind::EpsilonGreedy;
        else if (value == "fixed-awgn") cfg.algorithm = AlgorithmKind::FixedAwgn;
        else errors.push_back(ctx + ": unknown algorithm '" + value + "'");
      } else if (key == "window_w") as_int(cfg.window_w);
      else if (key == "epsilon0") as_double(cfg.epsilon0);
      else if (key == "fixed_m") as_int(cfg.fixed_m);
      else if (key == "fixed_jnr_db") as_double(cfg.fixed_jnr_db);
      else if (key == "fixed_rho") as_double(cfg.fixed_rho);
      else errors.push_back(ctx + ": unknown key");
    } else if (section == "oracle") {
      if (key == "grid_m") as_int(cfg.oracle_grid_m);
      else errors.push_back(ctx + ": unknown key");
    } else if (section == "output") {
      if (key == "dir") cfg.out_dir = value;
      else errors.push_back(ctx + ": unknown key");
    } else {
      errors.push_back("line " + std::to_string(lineno) + ": unknown section '" + section + "'");
    }
  }

  if (cfg.victims.empty()) cfg.victims.push_back(VictimConfig{});
  const auto more = cfg.validate();
  errors.insert(errors.end(), more.begin(), more.end());
  if (!errors.empty()) {
    std::string joined = "configuration invalid:";
    for (const auto& e : errors) joined += "\n  - " + e;
    throw ConfigError(joined);
  }
  return cfg;
}

ExperimentConfig load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

}  // namespace jamlab
