#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace delbandit {

// Per-coordinate hybrid potential
//
//   f(x) = -2 * weight * sqrt(x) + inv_eta * x * log(x)
//
// weight carries the sqrt(t) schedule of the 1/2-Tsallis part, inv_eta the
// adaptive rate of the negentropy part. Either part may be switched off by
// setting its coefficient to zero, but not both at once.
struct PotentialParams {
  double weight = 0.0;
  double inv_eta = 0.0;
};

inline void check_params(const PotentialParams& p) {
  if (!(p.weight >= 0.0) || !(p.inv_eta >= 0.0))
    throw std::invalid_argument("potential: coefficients must be nonnegative");
  if (p.weight + p.inv_eta <= 0.0)
    throw std::invalid_argument("potential: weight and inv_eta cannot both be zero");
}

// f(x), with the x*log(x) -> 0 boundary limit so mesh points with exact
// zeros evaluate finitely.
inline double potential_value(double x, const PotentialParams& p) {
  if (!(x >= 0.0)) throw std::domain_error("potential_value: x must be >= 0");
  if (x == 0.0) return 0.0;
  return -2.0 * p.weight * std::sqrt(x) + p.inv_eta * x * std::log(x);
}

// f'(x) = -weight * x^(-1/2) + inv_eta * (log(x) + 1); strictly increasing.
inline double potential_derivative(double x, const PotentialParams& p) {
  if (!(x > 0.0)) throw std::domain_error("potential_derivative: x must be > 0");
  return -p.weight / std::sqrt(x) + p.inv_eta * (std::log(x) + 1.0);
}

// f''(x) = weight/2 * x^(-3/2) + inv_eta * x^(-1) > 0.
inline double potential_second_derivative(double x, const PotentialParams& p) {
  if (!(x > 0.0)) throw std::domain_error("potential_second_derivative: x must be > 0");
  return 0.5 * p.weight / (x * std::sqrt(x)) + p.inv_eta / x;
}

// Inverse of f'. Solves f'(x) = y for x > 0 to |f'(x) - y| <= 1e-12*max(1,|y|).
//
// The hybrid derivative has no closed-form inverse, so we run a safeguarded
// Newton iteration on u = log(x), which keeps all iterates positive. In
// u-coordinates g(u) = f'(exp(u)) - y is increasing and concave, so Newton
// converges from either side once bracketed. The pure-Tsallis and
// pure-negentropy special cases are closed form.
inline double invert_derivative(double y, const PotentialParams& p) {
  check_params(p);
  const double w = p.weight;
  const double ie = p.inv_eta;
  if (ie == 0.0) {
    if (y >= 0.0)
      throw std::range_error("invert_derivative: pure-Tsallis derivative is always negative");
    const double r = w / (-y);
    return r * r;
  }
  if (w == 0.0) return std::exp(y / ie - 1.0);

  auto g = [&](double u) { return -w * std::exp(-0.5 * u) + ie * (u + 1.0) - y; };
  auto gprime = [&](double u) { return 0.5 * w * std::exp(-0.5 * u) + ie; };

  double u = y < 0.0 ? 2.0 * (std::log(w) - std::log(-y))  // Tsallis-only guess
                     : y / ie - 1.0;                       // negentropy-only guess
  u = std::clamp(u, -700.0, 700.0);

  // Bracket the root; g -> -inf as u -> -inf and +inf as u -> +inf.
  double lo = u, hi = u, step = 1.0;
  int guard = 0;
  if (g(u) >= 0.0) {
    while (g(lo) > 0.0) {
      lo -= step;
      step *= 2.0;
      if (++guard > 200) throw std::runtime_error("invert_derivative: bracketing failed");
    }
  } else {
    while (g(hi) < 0.0) {
      hi += step;
      step *= 2.0;
      if (++guard > 200) throw std::runtime_error("invert_derivative: bracketing failed");
    }
  }

  const double ytol = 5e-14 * std::max(1.0, std::abs(y));
  for (int it = 0;; ++it) {
    if (it >= 200) throw std::runtime_error("invert_derivative: Newton did not converge");
    const double val = g(u);
    if (std::abs(val) <= ytol) break;
    if (val > 0.0) hi = u; else lo = u;
    double next = u - val / gprime(u);
    if (!(next >= lo && next <= hi)) next = 0.5 * (lo + hi);
    if (std::abs(next - u) <= 1e-15 * std::max(1.0, std::abs(u))) {
      u = next;
      break;
    }
    u = next;
  }
  return std::max(std::exp(u), std::numeric_limits<double>::min());
}

}  // namespace delbandit
