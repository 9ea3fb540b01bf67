#pragma once

#include <algorithm>
#include <cmath>

namespace delbandit {

// Regret bound for the simple tuning: 4*sqrt(k*n) + sqrt(8*D*log(k)),
// where D is the total delay of the instance. Natural log throughout.
inline double theorem1_bound(int k, long long n, long long total_delay) {
  return 4.0 * std::sqrt(static_cast<double>(k) * static_cast<double>(n)) +
         std::sqrt(8.0 * static_cast<double>(total_delay) * std::log(static_cast<double>(k)));
}

// Regret bound for the advanced tuning, evaluated at one candidate skip set:
// 4*sqrt(k*n) + 10 * max(|S| + sqrt(D_rest * log(k)), 2*log(k)), where
// D_rest is the total delay outside S. The true bound minimizes over all S;
// any candidate (we use the realized skip set) upper-bounds that minimum.
inline double theorem2_bound(int k, long long n, long long skip_count,
                             long long delay_outside_skips) {
  const double log_k = std::log(static_cast<double>(k));
  const double candidate =
      static_cast<double>(skip_count) +
      std::sqrt(static_cast<double>(delay_outside_skips) * log_k);
  return 4.0 * std::sqrt(static_cast<double>(k) * static_cast<double>(n)) +
         10.0 * std::max(candidate, 2.0 * log_k);
}

// Both bound values, computed from instance ground truth, with pass flags
// for a measured mean regret.
struct BoundCheck {
  double mean_regret = 0.0;
  double theorem1 = 0.0;
  double theorem2 = 0.0;
  bool theorem1_pass = false;
  bool theorem2_pass = false;
  long long total_delay = 0;
  long long skip_count = 0;
  long long delay_outside_skips = 0;
};

}  // namespace delbandit
