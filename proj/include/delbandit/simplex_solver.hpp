#pragma once

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <utility>
#include <vector>

#include "delbandit/potential.hpp"

namespace delbandit {

// A strictly positive probability vector over the arms.
struct SimplexDistribution {
  std::vector<double> probs;

  int arms() const { return static_cast<int>(probs.size()); }
};

// KKT stationarity certificate for a solve: the scalar multiplier c with
// f'(x_i) + L_i = c on every coordinate, and the worst residual of that
// identity at the returned point.
struct KktCertificate {
  double multiplier = 0.0;
  double max_residual = 0.0;
};

struct SolveResult {
  SimplexDistribution dist;
  KktCertificate cert;
};

// Objective <x, L> + sum_i f(x_i); shared by the solver tests and the mesh
// oracle, evaluated directly from the potential (not through the KKT path).
inline double objective_value(const SimplexDistribution& x,
                              const std::vector<double>& losses,
                              const PotentialParams& p) {
  if (x.probs.size() != losses.size())
    throw std::invalid_argument("objective_value: dimension mismatch");
  double v = 0.0;
  for (std::size_t i = 0; i < losses.size(); ++i)
    v += x.probs[i] * losses[i] + potential_value(x.probs[i], p);
  return v;
}

// Minimizes <x, L> + F(x) over the probability simplex.
//
// By KKT there is a scalar c with x_i = (f')^{-1}(c - L_i), and the total
// mass sum_i x_i(c) is continuous and strictly increasing in c, so the
// problem reduces to a one-dimensional root-find on c. Losses are shifted
// by min(L) first (the minimizer is invariant under constant shifts), which
// keeps magnitudes bounded as cumulative losses grow. With min(L) = 0 the
// root is bracketed by [f'(1/k), f'(1)]; the widening loops below only fire
// on floating-point edge cases.
//
// Tolerances are fixed: 1e-12 relative for the coordinate inversion, 1e-10
// for normalization, 1e-8 certified KKT residual.
inline SolveResult solve_distribution(const std::vector<double>& losses,
                                      const PotentialParams& p) {
  const int k = static_cast<int>(losses.size());
  if (k < 2) throw std::invalid_argument("solve_distribution: need k >= 2");
  check_params(p);

  double shift = losses[0];
  for (double v : losses) shift = std::min(shift, v);
  std::vector<double> L(losses);
  for (double& v : L) v -= shift;

  std::vector<double> x(k);
  auto mass_at = [&](double c) {
    double s = 0.0;
    for (int i = 0; i < k; ++i) {
      x[i] = invert_derivative(c - L[i], p);
      s += x[i];
    }
    return s;
  };

  double lo = potential_derivative(1.0 / k, p);
  double hi = potential_derivative(1.0, p);
  double width = std::max(1.0, hi - lo);
  int guard = 0;
  while (mass_at(lo) > 1.0) {
    lo -= width;
    width *= 2.0;
    if (++guard > 200)
      throw std::runtime_error("solve_distribution: bracket expansion failed (non-finite losses?)");
  }
  // Pure Tsallis has mass >= 1 at hi = f'(1) by construction and c must stay
  // below the shifted minimum loss, so only the hybrid case may widen here.
  width = std::max(1.0, hi - lo);
  guard = 0;
  while (p.inv_eta > 0.0 && mass_at(hi) < 1.0) {
    hi += width;
    width *= 2.0;
    if (++guard > 200)
      throw std::runtime_error("solve_distribution: bracket expansion failed (non-finite losses?)");
  }

  double c = 0.5 * (lo + hi);
  double mass = mass_at(c);
  for (int it = 0; it < 200; ++it) {
    const double err = mass - 1.0;
    if (std::abs(err) <= 1e-13) break;
    if (err > 0.0) hi = c; else lo = c;
    double slope = 0.0;
    for (int i = 0; i < k; ++i) slope += 1.0 / potential_second_derivative(x[i], p);
    double next = c - err / slope;
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    if (std::abs(next - c) <= 1e-16 * std::max(1.0, std::abs(c))) {
      c = next;
      mass = mass_at(c);
      break;
    }
    c = next;
    mass = mass_at(c);
  }
  if (!(std::abs(mass - 1.0) <= 1e-10))
    throw std::runtime_error("solve_distribution: normalization tolerance not met");

  KktCertificate cert;
  cert.multiplier = c + shift;
  for (int i = 0; i < k; ++i) {
    const double r = std::abs(potential_derivative(x[i], p) + L[i] - c);
    cert.max_residual = std::max(cert.max_residual, r);
  }
  return {SimplexDistribution{std::move(x)}, cert};
}

}  // namespace delbandit
