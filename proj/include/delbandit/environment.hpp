#pragma once

#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>
#include <utility>
#include <vector>

#include "delbandit/random.hpp"

namespace delbandit {

struct Observation {
  int origin_round = 0;
  int arm = 0;
  double loss = 0.0;
};

// Losses and delays fixed before the game starts. delays[t-1] is the delay
// of round t; every generated instance satisfies t + d_t <= n, so all
// observations land within the horizon.
struct Instance {
  int n = 0;
  int k = 0;
  std::vector<int> delays;
  std::vector<std::vector<double>> losses;  // losses[t-1][arm]
};

inline void validate_instance(const Instance& inst) {
  if (inst.n < 1) throw std::invalid_argument("instance: n must be >= 1");
  if (inst.k < 2) throw std::invalid_argument("instance: k must be >= 2");
  if (static_cast<int>(inst.delays.size()) != inst.n)
    throw std::invalid_argument("instance: delays length must equal n");
  if (static_cast<int>(inst.losses.size()) != inst.n)
    throw std::invalid_argument("instance: losses must have n rows");
  for (int t = 1; t <= inst.n; ++t) {
    const int d = inst.delays[t - 1];
    if (d < 0 || t + d > inst.n)
      throw std::invalid_argument("instance: delays must satisfy 0 <= d_t <= n - t");
    if (static_cast<int>(inst.losses[t - 1].size()) != inst.k)
      throw std::invalid_argument("instance: loss rows must have k entries");
    for (double v : inst.losses[t - 1])
      if (!(v >= 0.0 && v <= 1.0))
        throw std::invalid_argument("instance: losses must lie in [0,1]");
  }
}

// Plays the fixed instance forward and releases each observation exactly
// once, at round s + d_s.
class DelayedEnvironment {
 public:
  explicit DelayedEnvironment(Instance inst) : inst_(std::move(inst)) {
    validate_instance(inst_);
    due_.resize(inst_.n);
  }

  std::vector<Observation> step(int arm) {
    if (round_ >= inst_.n) throw std::out_of_range("DelayedEnvironment: episode is over");
    if (arm < 0 || arm >= inst_.k) throw std::invalid_argument("DelayedEnvironment: bad arm");
    ++round_;
    const int t = round_;
    const double loss = inst_.losses[t - 1][arm];
    due_[t - 1 + inst_.delays[t - 1]].push_back({t, arm, loss});
    return std::move(due_[t - 1]);
  }

  int current_round() const { return round_; }
  const Instance& instance() const { return inst_; }

 private:
  Instance inst_;
  std::vector<std::vector<Observation>> due_;  // index = arrival round - 1
  int round_ = 0;
};

// Uniform delay d, clipped to n - t so late rounds stay inside the horizon.
inline std::vector<int> uniform_delays(int n, long long d) {
  if (d < 0) throw std::invalid_argument("uniform_delays: d must be >= 0");
  std::vector<int> out(n);
  for (int t = 1; t <= n; ++t)
    out[t - 1] = static_cast<int>(std::min<long long>(d, n - t));
  return out;
}

// First m = floor(sqrt(k*n/log(k))) rounds get the largest horizon-valid
// delay n - t, the rest get zero.
inline std::vector<int> unbalanced_delays(int n, int k) {
  if (n < 1) throw std::invalid_argument("unbalanced_delays: n must be >= 1");
  if (k < 2) throw std::invalid_argument("unbalanced_delays: k must be >= 2");
  const int m = static_cast<int>(
      std::floor(std::sqrt(static_cast<double>(k) * n / std::log(static_cast<double>(k)))));
  if (m >= n) throw std::invalid_argument("unbalanced_delays: horizon too small for this k");
  std::vector<int> out(n, 0);
  for (int t = 1; t <= m; ++t) out[t - 1] = n - t;
  return out;
}

// Oblivious Bernoulli loss table, drawn once up front. Row-major draw order
// (round, then arm) so a fixed seed pins the whole matrix.
inline std::vector<std::vector<double>> gen_stochastic_losses(int n, int k,
                                                              const std::vector<double>& means,
                                                              std::mt19937_64& rng) {
  if (static_cast<int>(means.size()) != k)
    throw std::invalid_argument("gen_stochastic_losses: need one mean per arm");
  for (double m : means)
    if (!(m >= 0.0 && m <= 1.0))
      throw std::invalid_argument("gen_stochastic_losses: means must lie in [0,1]");
  std::vector<std::vector<double>> losses(n, std::vector<double>(k));
  for (int t = 0; t < n; ++t)
    for (int i = 0; i < k; ++i) losses[t][i] = uniform01(rng) < means[i] ? 1.0 : 0.0;
  return losses;
}

inline Instance gen_uniform(int n, int k, long long d, std::vector<std::vector<double>> losses) {
  Instance inst{n, k, uniform_delays(n, d), std::move(losses)};
  validate_instance(inst);
  return inst;
}

inline Instance gen_unbalanced(int n, int k, std::vector<std::vector<double>> losses) {
  Instance inst{n, k, unbalanced_delays(n, k), std::move(losses)};
  validate_instance(inst);
  return inst;
}

struct RoundRecord {
  int arm = 0;
  double loss = 0.0;
  double cum_loss = 0.0;
  double cum_regret = 0.0;  // against the best fixed arm of the prefix
  double inv_eta = 0.0;
  long long outstanding = 0;
  int deactivated_round = -1;  // -1 = none this round
};

struct RegretReport {
  std::vector<RoundRecord> rounds;
  int best_arm = 0;
  double pseudo_regret = 0.0;
  double learner_loss = 0.0;
  long long total_delay = 0;      // D
  long long cum_outstanding = 0;  // final cumulative tuner statistic
  long long skip_count = 0;
  double final_inv_eta = 0.0;
};

// Pseudo-regret of a realized action trace: cumulative learner loss minus
// the best fixed arm in hindsight, lowest index breaking ties. Fills the
// loss-side columns; tuner diagnostics are stitched in by the runner.
inline RegretReport compute_regret(const Instance& inst, const std::vector<int>& actions) {
  if (static_cast<int>(actions.size()) != inst.n)
    throw std::invalid_argument("compute_regret: trace length must equal n");
  RegretReport report;
  report.rounds.resize(inst.n);
  std::vector<double> arm_cum(inst.k, 0.0);
  double learner = 0.0;
  for (int t = 1; t <= inst.n; ++t) {
    const int arm = actions[t - 1];
    if (arm < 0 || arm >= inst.k) throw std::invalid_argument("compute_regret: bad arm in trace");
    learner += inst.losses[t - 1][arm];
    double best = std::numeric_limits<double>::infinity();
    for (int i = 0; i < inst.k; ++i) {
      arm_cum[i] += inst.losses[t - 1][i];
      if (arm_cum[i] < best) best = arm_cum[i];
    }
    RoundRecord& row = report.rounds[t - 1];
    row.arm = arm;
    row.loss = inst.losses[t - 1][arm];
    row.cum_loss = learner;
    row.cum_regret = learner - best;
  }
  int best_arm = 0;
  for (int i = 1; i < inst.k; ++i)
    if (arm_cum[i] < arm_cum[best_arm]) best_arm = i;
  report.best_arm = best_arm;
  report.learner_loss = learner;
  report.pseudo_regret = learner - arm_cum[best_arm];
  for (int d : inst.delays) report.total_delay += d;
  return report;
}

}  // namespace delbandit
