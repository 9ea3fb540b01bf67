#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <utility>
#include <vector>

namespace delbandit {

// Arrival bookkeeping for delayed feedback. Rounds are 1-based. A round is
// registered when acted on; its delay becomes known only when the
// observation arrives, so nothing here ever reads a delay ahead of time.
class ArrivalLedger {
 public:
  // Rounds must be registered in order 1, 2, 3, ...
  void register_action(int round) {
    if (round != static_cast<int>(arrival_round_.size()) + 1)
      throw std::logic_error("ArrivalLedger: rounds must be registered in order");
    arrival_round_.push_back(kPending);
    ++outstanding_;
  }

  void record_arrival(int origin_round, int round) {
    if (origin_round < 1 || origin_round > registered_rounds())
      throw std::invalid_argument("ArrivalLedger: arrival for unregistered round");
    if (round < origin_round)
      throw std::invalid_argument("ArrivalLedger: arrival before action");
    int& slot = arrival_round_[origin_round - 1];
    if (slot != kPending)
      throw std::invalid_argument("ArrivalLedger: duplicate arrival");
    slot = round;
    --outstanding_;
  }

  int registered_rounds() const { return static_cast<int>(arrival_round_.size()); }

  bool has_arrived(int round) const {
    return arrival_round_.at(round - 1) != kPending;
  }

  // d_s = arrival round - action round; only known after arrival.
  int known_delay(int round) const {
    const int a = arrival_round_.at(round - 1);
    if (a == kPending) throw std::logic_error("ArrivalLedger: delay not yet observed");
    return a - round;
  }

  // Count of registered rounds whose observation is still pending.
  long long outstanding_now() const { return outstanding_; }

  // Definitional form: sum over s < t of the indicator {s + d_s >= t},
  // i.e. rounds not arrived strictly before round t. Retroactive queries
  // work because arrival rounds are retained. O(t); tests cross-check the
  // O(1) counter against this.
  long long outstanding_count(int t) const {
    if (t < 1 || t > registered_rounds() + 1)
      throw std::out_of_range("ArrivalLedger: outstanding_count beyond known rounds");
    long long count = 0;
    for (int s = 1; s < t; ++s) {
      const int a = arrival_round_[s - 1];
      if (a == kPending || a >= t) ++count;
    }
    return count;
  }

 private:
  static constexpr int kPending = -1;
  std::vector<int> arrival_round_;
  long long outstanding_ = 0;
};

// eta_t^{-1} = sqrt(2 * cum_outstanding / log(k)). The cumulative sum is
// kept in exact integers; the rate is recomputed from it each round, so it
// is non-decreasing by construction.
class SimpleTuner {
 public:
  explicit SimpleTuner(int arm_count) : log_k_(std::log(arm_count)) {
    if (arm_count < 2) throw std::invalid_argument("SimpleTuner: need k >= 2");
  }

  // outstanding must equal the ledger's count at the start of round t.
  double begin_round(int t, long long outstanding) {
    if (t != round_ + 1) throw std::logic_error("SimpleTuner: rounds must advance one at a time");
    round_ = t;
    cum_outstanding_ += outstanding;
    last_outstanding_ = outstanding;
    last_inv_eta_ = cum_outstanding_ == 0
                        ? 0.0
                        : std::sqrt(2.0 * static_cast<double>(cum_outstanding_) / log_k_);
    return last_inv_eta_;
  }

  long long cum_outstanding() const { return cum_outstanding_; }
  long long last_outstanding() const { return last_outstanding_; }
  double last_inv_eta() const { return last_inv_eta_; }
  double log_k() const { return log_k_; }

 private:
  double log_k_;
  int round_ = 0;
  long long cum_outstanding_ = 0;
  long long last_outstanding_ = 0;
  double last_inv_eta_ = 0.0;
};

// Skipping variant: eta_t^{-1} = sqrt(cum_truncated / log(k)) (no factor 2),
// where rounds whose waiting time ever exceeded the current rate are
// deactivated and stop counting toward the outstanding statistic. Their
// observations are still consumed by the policy; only the tuning changes.
//
// Indicators are monotone (once off, off for good), so the state is the
// current active set plus a deactivation log rather than an n x n table.
class AdvancedTuner {
 public:
  explicit AdvancedTuner(int arm_count) : log_k_(std::log(arm_count)) {
    if (arm_count < 2) throw std::invalid_argument("AdvancedTuner: need k >= 2");
  }

  // In order: count still-active outstanding rounds, fold into the
  // cumulative sum, refresh the rate, then sweep for deactivations using the
  // fresh rate. The sweep compares min{d_s, t - s} against eta_t^{-1}; for a
  // pending round the delay is unknown but at least t - s, so the waiting
  // time stands in for it exactly.
  double begin_round(const ArrivalLedger& ledger, int t) {
    if (t != seen_rounds_ + 1)
      throw std::logic_error("AdvancedTuner: rounds must advance one at a time");
    const int registered = ledger.registered_rounds();
    if (registered != t - 1)
      throw std::logic_error("AdvancedTuner: ledger out of step with round counter");
    for (int s = static_cast<int>(active_.size()) + 1; s <= registered; ++s) {
      active_.push_back(1);
      candidates_.push_back(s);
    }
    seen_rounds_ = t;

    long long truncated = 0;
    for (int s : candidates_)
      if (!ledger.has_arrived(s)) ++truncated;
    cum_truncated_ += truncated;
    const double inv_eta =
        cum_truncated_ == 0 ? 0.0 : std::sqrt(static_cast<double>(cum_truncated_) / log_k_);

    std::size_t kept = 0;
    for (std::size_t idx = 0; idx < candidates_.size(); ++idx) {
      const int s = candidates_[idx];
      const double waited =
          ledger.has_arrived(s) ? static_cast<double>(ledger.known_delay(s))
                                : static_cast<double>(t - s);
      if (waited > inv_eta) {
        active_[s - 1] = 0;
        deactivations_.emplace_back(t, s);
      } else {
        candidates_[kept++] = s;
      }
    }
    candidates_.resize(kept);

    last_truncated_ = truncated;
    last_inv_eta_ = inv_eta;
    return inv_eta;
  }

  bool is_active(int round) const {
    if (round < 1) throw std::out_of_range("AdvancedTuner: bad round");
    if (round > static_cast<int>(active_.size())) return true;
    return active_[round - 1] != 0;
  }

  long long cum_truncated() const { return cum_truncated_; }
  long long last_truncated() const { return last_truncated_; }
  double last_inv_eta() const { return last_inv_eta_; }
  double log_k() const { return log_k_; }

  // (round it happened, deactivated origin round), in event order.
  const std::vector<std::pair<int, int>>& deactivation_log() const { return deactivations_; }

  // The skip set S, ascending.
  std::vector<int> skipped_set() const {
    std::vector<int> s;
    s.reserve(deactivations_.size());
    for (const auto& [t, origin] : deactivations_) s.push_back(origin);
    std::sort(s.begin(), s.end());
    return s;
  }

 private:
  double log_k_;
  int seen_rounds_ = 0;
  long long cum_truncated_ = 0;
  long long last_truncated_ = 0;
  double last_inv_eta_ = 0.0;
  std::vector<char> active_;
  std::vector<int> candidates_;  // active rounds, arrived or not
  std::vector<std::pair<int, int>> deactivations_;
};

}  // namespace delbandit
