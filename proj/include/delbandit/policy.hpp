#pragma once

#include <cmath>
#include <random>
#include <stdexcept>
#include <unordered_map>
#include <utility>
#include <vector>

#include "delbandit/delay_ledger.hpp"
#include "delbandit/random.hpp"
#include "delbandit/simplex_solver.hpp"

namespace delbandit {

enum class TunerKind { kSimple, kAdvanced, kTsallisBaseline };

struct ActionSample {
  int round = 0;
  SimplexDistribution distribution;
  int arm = 0;
  double prob_of_arm = 0.0;
};

// Importance-weighted estimate: loss / prob on the played arm, zero
// elsewhere (the zero coordinates stay implicit).
struct LossEstimate {
  int origin_round = 0;
  int arm = 0;
  double value = 0.0;
};

inline LossEstimate make_estimate(const ActionSample& sample, double observed_loss) {
  if (!(observed_loss >= 0.0 && observed_loss <= 1.0))
    throw std::invalid_argument("make_estimate: loss must lie in [0,1]");
  if (!(sample.prob_of_arm > 0.0))
    throw std::invalid_argument("make_estimate: sampling probability must be positive");
  return {sample.round, sample.arm, observed_loss / sample.prob_of_arm};
}

// FTRL over the hybrid potential with delayed importance-weighted updates.
// Each round: ask the tuner for eta_t^{-1}, solve for x_t against the
// cumulative loss of everything that has arrived so far, sample one arm by
// inverse CDF, and fold arrivals in at the end of the round so they first
// influence x_{t+1}.
class FtrlPolicy {
 public:
  FtrlPolicy(int arm_count, TunerKind tuner)
      : k_(arm_count),
        kind_(tuner),
        cum_obs_loss_(arm_count, 0.0),
        simple_(arm_count),
        advanced_(arm_count) {
    if (arm_count < 2) throw std::invalid_argument("FtrlPolicy: need k >= 2");
  }

  ActionSample act(std::mt19937_64& rng) {
    const int t = round_ + 1;
    double inv_eta = 0.0;
    long long outstanding = 0;
    switch (kind_) {
      case TunerKind::kSimple:
        outstanding = ledger_.outstanding_now();
        inv_eta = simple_.begin_round(t, outstanding);
        break;
      case TunerKind::kAdvanced:
        inv_eta = advanced_.begin_round(ledger_, t);
        outstanding = advanced_.last_truncated();
        break;
      case TunerKind::kTsallisBaseline:
        outstanding = ledger_.outstanding_now();
        inv_eta = 0.0;
        break;
    }

    SolveResult solved =
        solve_distribution(cum_obs_loss_, {std::sqrt(static_cast<double>(t)), inv_eta});

    // One uniform draw, inverse CDF in fixed arm order.
    const double u = uniform01(rng);
    int arm = k_ - 1;
    double acc = 0.0;
    for (int i = 0; i < k_; ++i) {
      acc += solved.dist.probs[i];
      if (u < acc) {
        arm = i;
        break;
      }
    }
    const double prob = solved.dist.probs[arm];

    ledger_.register_action(t);
    pending_probs_.emplace(t, prob);
    round_ = t;
    last_inv_eta_ = inv_eta;
    last_outstanding_ = outstanding;
    last_kkt_ = solved.cert;
    return {t, std::move(solved.dist), arm, prob};
  }

  // Fold in everything that arrived at the end of the current round.
  void ingest(const std::vector<LossEstimate>& estimates, int round) {
    if (round != round_)
      throw std::logic_error("FtrlPolicy: ingest must run at the end of the current round");
    for (const LossEstimate& e : estimates) {
      if (e.arm < 0 || e.arm >= k_)
        throw std::invalid_argument("FtrlPolicy: estimate for unknown arm");
      if (!(e.value >= 0.0) || !std::isfinite(e.value))
        throw std::invalid_argument("FtrlPolicy: estimate must be finite and nonnegative");
      ledger_.record_arrival(e.origin_round, round);  // rejects duplicates/unregistered
      cum_obs_loss_[e.arm] += e.value;
      pending_probs_.erase(e.origin_round);
    }
  }

  int arms() const { return k_; }
  TunerKind tuner_kind() const { return kind_; }
  int round() const { return round_; }
  const std::vector<double>& cum_obs_loss() const { return cum_obs_loss_; }
  const ArrivalLedger& ledger() const { return ledger_; }
  const SimpleTuner& simple_tuner() const { return simple_; }
  const AdvancedTuner& advanced_tuner() const { return advanced_; }
  double last_inv_eta() const { return last_inv_eta_; }
  long long last_outstanding() const { return last_outstanding_; }
  const KktCertificate& last_kkt() const { return last_kkt_; }

  double pending_prob(int origin_round) const {
    auto it = pending_probs_.find(origin_round);
    if (it == pending_probs_.end())
      throw std::out_of_range("FtrlPolicy: no pending probability for round");
    return it->second;
  }

 private:
  int k_;
  TunerKind kind_;
  std::vector<double> cum_obs_loss_;
  int round_ = 0;
  ArrivalLedger ledger_;
  SimpleTuner simple_;
  AdvancedTuner advanced_;
  std::unordered_map<int, double> pending_probs_;
  double last_inv_eta_ = 0.0;
  long long last_outstanding_ = 0;
  KktCertificate last_kkt_;
};

}  // namespace delbandit
