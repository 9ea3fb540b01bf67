#pragma once

#include <atomic>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <stdexcept>
#include <string>
#include <thread>
#include <unordered_map>
#include <utility>
#include <vector>

#include <json.hpp>

#include "delbandit/bounds.hpp"
#include "delbandit/environment.hpp"
#include "delbandit/instance_io.hpp"
#include "delbandit/policy.hpp"
#include "delbandit/random.hpp"

namespace delbandit {

enum class DelayGenKind { kZero, kUniform, kUnbalanced, kFile };

struct ExperimentConfig {
  int n = 0;
  int k = 0;
  TunerKind tuner = TunerKind::kSimple;
  DelayGenKind delay_gen = DelayGenKind::kZero;
  long long uniform_delay = 0;
  std::string instance_file;
  std::vector<double> means;
  std::vector<std::uint64_t> seeds;
  std::string out_dir;  // empty = keep results in memory only
  bool check_bounds = false;
  std::string generator_id = kGeneratorId;
};

inline const char* tuner_name(TunerKind t) {
  switch (t) {
    case TunerKind::kSimple: return "simple";
    case TunerKind::kAdvanced: return "advanced";
    case TunerKind::kTsallisBaseline: return "tsallis";
  }
  return "?";
}

inline TunerKind parse_tuner(const std::string& name) {
  if (name == "simple") return TunerKind::kSimple;
  if (name == "advanced") return TunerKind::kAdvanced;
  if (name == "tsallis") return TunerKind::kTsallisBaseline;
  throw std::invalid_argument("unknown tuner: " + name);
}

inline std::string delay_gen_name(const ExperimentConfig& cfg) {
  switch (cfg.delay_gen) {
    case DelayGenKind::kZero: return "zero";
    case DelayGenKind::kUniform: return "uniform:" + std::to_string(cfg.uniform_delay);
    case DelayGenKind::kUnbalanced: return "unbalanced";
    case DelayGenKind::kFile: return "file:" + cfg.instance_file;
  }
  return "?";
}

inline void validate_config(const ExperimentConfig& cfg) {
  if (cfg.seeds.empty()) throw std::invalid_argument("config: need at least one seed");
  if (cfg.delay_gen == DelayGenKind::kFile) {
    if (cfg.instance_file.empty()) throw std::invalid_argument("config: missing instance file");
    return;
  }
  if (cfg.n < 1) throw std::invalid_argument("config: n must be >= 1");
  if (cfg.k < 2) throw std::invalid_argument("config: k must be >= 2");
  if (static_cast<int>(cfg.means.size()) != cfg.k)
    throw std::invalid_argument("config: need one loss mean per arm");
  for (double m : cfg.means)
    if (!(m >= 0.0 && m <= 1.0)) throw std::invalid_argument("config: means must lie in [0,1]");
  if (cfg.uniform_delay < 0) throw std::invalid_argument("config: delay must be >= 0");
}

// Losses are drawn from the seed's environment stream before the first
// step; delays come from the generator. The policy stream never touches
// either, so the instance is oblivious to the actions by construction.
inline Instance materialize_instance(const ExperimentConfig& cfg, std::uint64_t seed) {
  if (cfg.delay_gen == DelayGenKind::kFile) return load_instance(cfg.instance_file);
  const SeedStreams streams = derive_streams(seed);
  std::mt19937_64 env_rng(streams.env_seed);
  auto losses = gen_stochastic_losses(cfg.n, cfg.k, cfg.means, env_rng);
  switch (cfg.delay_gen) {
    case DelayGenKind::kZero: return gen_uniform(cfg.n, cfg.k, 0, std::move(losses));
    case DelayGenKind::kUniform:
      return gen_uniform(cfg.n, cfg.k, cfg.uniform_delay, std::move(losses));
    case DelayGenKind::kUnbalanced: return gen_unbalanced(cfg.n, cfg.k, std::move(losses));
    case DelayGenKind::kFile: break;
  }
  throw std::logic_error("materialize_instance: unreachable");
}

struct RunResult {
  std::uint64_t seed = 0;
  RegretReport report;
  std::vector<int> skipped;  // realized skip set (advanced tuner only)
};

// One full episode: policy vs environment on a fixed instance. Tuner
// diagnostics are folded into the per-round records.
inline RunResult run_single(const Instance& inst, TunerKind tuner, std::uint64_t seed) {
  const SeedStreams streams = derive_streams(seed);
  std::mt19937_64 policy_rng(streams.policy_seed);
  DelayedEnvironment env(inst);
  FtrlPolicy policy(inst.k, tuner);

  std::vector<int> actions;
  actions.reserve(inst.n);
  std::vector<double> inv_etas(inst.n);
  std::vector<long long> outstanding(inst.n);
  std::unordered_map<int, ActionSample> open_samples;

  for (int t = 1; t <= inst.n; ++t) {
    ActionSample sample = policy.act(policy_rng);
    actions.push_back(sample.arm);
    inv_etas[t - 1] = policy.last_inv_eta();
    outstanding[t - 1] = policy.last_outstanding();
    std::vector<Observation> due = env.step(sample.arm);
    open_samples.emplace(t, std::move(sample));
    std::vector<LossEstimate> estimates;
    estimates.reserve(due.size());
    for (const Observation& ob : due) {
      auto it = open_samples.find(ob.origin_round);
      if (it == open_samples.end())
        throw std::logic_error("run_single: delivery for a round with no open sample");
      estimates.push_back(make_estimate(it->second, ob.loss));
      open_samples.erase(it);
    }
    policy.ingest(estimates, t);
  }
  if (policy.ledger().outstanding_now() != 0)
    throw std::logic_error("run_single: observations left outstanding past the horizon");

  RunResult out;
  out.seed = seed;
  out.report = compute_regret(inst, actions);
  for (int t = 1; t <= inst.n; ++t) {
    out.report.rounds[t - 1].inv_eta = inv_etas[t - 1];
    out.report.rounds[t - 1].outstanding = outstanding[t - 1];
  }
  out.report.final_inv_eta = inv_etas[inst.n - 1];
  switch (tuner) {
    case TunerKind::kSimple:
      out.report.cum_outstanding = policy.simple_tuner().cum_outstanding();
      break;
    case TunerKind::kAdvanced: {
      const AdvancedTuner& adv = policy.advanced_tuner();
      out.report.cum_outstanding = adv.cum_truncated();
      for (const auto& [round, origin] : adv.deactivation_log())
        out.report.rounds[round - 1].deactivated_round = origin;
      out.skipped = adv.skipped_set();
      out.report.skip_count = static_cast<long long>(out.skipped.size());
      break;
    }
    case TunerKind::kTsallisBaseline: {
      long long cum = 0;
      for (long long v : outstanding) cum += v;
      out.report.cum_outstanding = cum;
      break;
    }
  }
  return out;
}

namespace detail {
inline void format_double(std::string& line, double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  line += buf;
}
}  // namespace detail

// Fixed schema: round,arm,loss,cum_loss,cum_regret,inv_eta,outstanding,
// deactivated_round (empty when none). One row per round.
inline void write_csv(const std::string& path, const RegretReport& report) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("write_csv: cannot open " + path);
  out << "round,arm,loss,cum_loss,cum_regret,inv_eta,outstanding,deactivated_round\n";
  std::string line;
  for (std::size_t i = 0; i < report.rounds.size(); ++i) {
    const RoundRecord& r = report.rounds[i];
    line.clear();
    line += std::to_string(i + 1);
    line += ',';
    line += std::to_string(r.arm);
    line += ',';
    detail::format_double(line, r.loss);
    line += ',';
    detail::format_double(line, r.cum_loss);
    line += ',';
    detail::format_double(line, r.cum_regret);
    line += ',';
    detail::format_double(line, r.inv_eta);
    line += ',';
    line += std::to_string(r.outstanding);
    line += ',';
    if (r.deactivated_round >= 0) line += std::to_string(r.deactivated_round);
    line += '\n';
    out << line;
  }
}

struct ExperimentSummary {
  ExperimentConfig config;
  std::vector<RunResult> runs;  // in seed order
  double mean_regret = 0.0;
  double stddev_regret = 0.0;
  long long total_delay = 0;
  std::vector<int> skip_set;  // realized by the advanced tuner (delay-driven,
                              // hence identical across seeds)
  BoundCheck bounds;          // filled when config.check_bounds
};

// Bound formulas evaluated from instance ground truth (delays), never from
// learner state; the realized skip set serves as the theorem-2 candidate.
inline BoundCheck check_bounds(const ExperimentSummary& summary, const Instance& inst) {
  BoundCheck b;
  b.mean_regret = summary.mean_regret;
  for (int d : inst.delays) b.total_delay += d;
  long long skipped_delay = 0;
  for (int s : summary.skip_set) skipped_delay += inst.delays[s - 1];
  b.skip_count = static_cast<long long>(summary.skip_set.size());
  b.delay_outside_skips = b.total_delay - skipped_delay;
  b.theorem1 = theorem1_bound(inst.k, inst.n, b.total_delay);
  b.theorem2 = theorem2_bound(inst.k, inst.n, b.skip_count, b.delay_outside_skips);
  b.theorem1_pass = b.mean_regret <= b.theorem1;
  b.theorem2_pass = b.mean_regret <= b.theorem2;
  return b;
}

inline nlohmann::json summary_to_json(const ExperimentSummary& summary) {
  nlohmann::json j;
  j["version"] = 1;
  nlohmann::json cfg;
  cfg["n"] = summary.config.n;
  cfg["k"] = summary.config.k;
  cfg["tuner"] = tuner_name(summary.config.tuner);
  cfg["delay_gen"] = delay_gen_name(summary.config);
  cfg["means"] = summary.config.means;
  cfg["seeds"] = summary.config.seeds;
  cfg["generator"] = summary.config.generator_id;
  j["config"] = cfg;
  j["total_delay"] = summary.total_delay;
  j["mean_regret"] = summary.mean_regret;
  j["stddev_regret"] = summary.stddev_regret;
  nlohmann::json per_seed = nlohmann::json::array();
  for (const RunResult& r : summary.runs) {
    nlohmann::json row;
    row["seed"] = r.seed;
    row["pseudo_regret"] = r.report.pseudo_regret;
    row["learner_loss"] = r.report.learner_loss;
    row["best_arm"] = r.report.best_arm;
    row["final_inv_eta"] = r.report.final_inv_eta;
    row["cum_outstanding"] = r.report.cum_outstanding;
    row["skip_count"] = r.report.skip_count;
    per_seed.push_back(row);
  }
  j["per_seed"] = per_seed;
  j["skip_set"] = summary.skip_set;
  if (summary.config.check_bounds) {
    nlohmann::json b;
    b["mean_regret"] = summary.bounds.mean_regret;
    b["theorem1_bound"] = summary.bounds.theorem1;
    b["theorem1_pass"] = summary.bounds.theorem1_pass;
    b["theorem2_bound"] = summary.bounds.theorem2;
    b["theorem2_pass"] = summary.bounds.theorem2_pass;
    b["total_delay"] = summary.bounds.total_delay;
    b["skip_count"] = summary.bounds.skip_count;
    b["delay_outside_skips"] = summary.bounds.delay_outside_skips;
    j["bound_checks"] = b;
  }
  return j;
}

// Runs every seed, aggregates in seed order, and (when out_dir is set)
// writes one CSV per seed plus summary.json. Seeds parallelize freely; the
// merge is single-threaded and deterministic.
inline ExperimentSummary run(const ExperimentConfig& cfg) {
  validate_config(cfg);
  ExperimentSummary summary;
  summary.config = cfg;
  const std::size_t num_seeds = cfg.seeds.size();
  summary.runs.resize(num_seeds);

  Instance reference_instance;  // seed-0 instance, for ground-truth delays
  const bool from_file = cfg.delay_gen == DelayGenKind::kFile;
  Instance file_instance;
  if (from_file) file_instance = load_instance(cfg.instance_file);

  std::mutex ref_mutex;
  auto run_one = [&](std::size_t idx) {
    Instance inst = from_file ? file_instance : materialize_instance(cfg, cfg.seeds[idx]);
    summary.runs[idx] = run_single(inst, cfg.tuner, cfg.seeds[idx]);
    if (idx == 0) {
      std::lock_guard<std::mutex> lock(ref_mutex);
      reference_instance = std::move(inst);
    }
  };

  const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
  const unsigned workers = static_cast<unsigned>(std::min<std::size_t>(hw, num_seeds));
  if (workers <= 1) {
    for (std::size_t i = 0; i < num_seeds; ++i) run_one(i);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w)
      pool.emplace_back([&] {
        for (std::size_t i; (i = next.fetch_add(1)) < num_seeds;) run_one(i);
      });
    for (std::thread& th : pool) th.join();
  }

  double mean = 0.0;
  for (const RunResult& r : summary.runs) mean += r.report.pseudo_regret;
  mean /= static_cast<double>(num_seeds);
  double var = 0.0;
  for (const RunResult& r : summary.runs) {
    const double d = r.report.pseudo_regret - mean;
    var += d * d;
  }
  summary.mean_regret = mean;
  summary.stddev_regret =
      num_seeds > 1 ? std::sqrt(var / static_cast<double>(num_seeds - 1)) : 0.0;
  summary.total_delay = summary.runs[0].report.total_delay;
  summary.skip_set = summary.runs[0].skipped;
  if (cfg.check_bounds) summary.bounds = check_bounds(summary, reference_instance);

  if (!cfg.out_dir.empty()) {
    std::filesystem::create_directories(cfg.out_dir);
    for (const RunResult& r : summary.runs) {
      const std::string path = cfg.out_dir + "/" + tuner_name(cfg.tuner) + "_seed" +
                               std::to_string(r.seed) + ".csv";
      write_csv(path, r.report);
    }
    std::ofstream out(cfg.out_dir + "/summary.json", std::ios::binary);
    if (!out) throw std::runtime_error("run: cannot write summary.json");
    out << summary_to_json(summary).dump(2) << "\n";
  }
  return summary;
}

}  // namespace delbandit
