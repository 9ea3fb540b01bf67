#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

#include "delbandit/simplex_solver.hpp"

namespace delbandit {

// Brute-force mesh minimizer of <x, L> + F(x) over the simplex, used only
// to validate solve_distribution. It never touches the KKT/root-find path:
// every candidate is scored by direct objective evaluation.
//
// k = 2 is a full scan of the 1-simplex mesh. k = 3 scans a coarse mesh
// exhaustively and then rescans a generous window around the argmin at 10x
// finer steps until the target mesh is reached; the objective is strictly
// convex, so each level's mesh minimizer sits within a cell or two of the
// continuous one and the window cannot lose it. k > 3 is rejected outright
// (the full mesh blows up combinatorially).
inline SimplexDistribution grid_oracle(const std::vector<double>& losses,
                                       const PotentialParams& p,
                                       double resolution) {
  const int k = static_cast<int>(losses.size());
  if (k < 2 || k > 3) throw std::invalid_argument("grid_oracle: k must be 2 or 3");
  if (!(resolution > 0.0) || resolution > 1e-3)
    throw std::invalid_argument("grid_oracle: resolution must be in (0, 1e-3]");
  check_params(p);
  const long long n = std::llround(1.0 / resolution);

  if (k == 2) {
    long long best = 0;
    double best_val = std::numeric_limits<double>::infinity();
    for (long long i = 0; i <= n; ++i) {
      const double a = static_cast<double>(i) / n;
      const double b = static_cast<double>(n - i) / n;
      const double v =
          a * losses[0] + b * losses[1] + potential_value(a, p) + potential_value(b, p);
      if (v < best_val) {
        best_val = v;
        best = i;
      }
    }
    return {{static_cast<double>(best) / n, static_cast<double>(n - best) / n}};
  }

  struct Cell {
    long long i = 0, j = 0;
    double val = std::numeric_limits<double>::infinity();
  };
  auto scan = [&](long long m, long long i0, long long i1, long long j0, long long j1) {
    Cell best;
    const long long ia = std::max<long long>(0, i0);
    const long long ib = std::min(m, i1);
    for (long long i = ia; i <= ib; ++i) {
      const double a = static_cast<double>(i) / m;
      const long long jb = std::min(m - i, j1);
      for (long long j = std::max<long long>(0, j0); j <= jb; ++j) {
        const double b = static_cast<double>(j) / m;
        const double c = static_cast<double>(m - i - j) / m;
        const double v = a * losses[0] + b * losses[1] + c * losses[2] +
                         potential_value(a, p) + potential_value(b, p) + potential_value(c, p);
        if (v < best.val) best = {i, j, v};
      }
    }
    return best;
  };

  std::vector<long long> levels{n};
  while (levels.back() > 2000) levels.push_back((levels.back() + 9) / 10);
  std::reverse(levels.begin(), levels.end());

  Cell cur = scan(levels[0], 0, levels[0], 0, levels[0]);
  for (std::size_t li = 1; li < levels.size(); ++li) {
    const long long m = levels[li];
    const long long prev = levels[li - 1];
    const long long ci = std::llround(static_cast<double>(cur.i) * m / prev);
    const long long cj = std::llround(static_cast<double>(cur.j) * m / prev);
    const long long hw = static_cast<long long>(std::ceil(5.0 * m / prev));
    cur = scan(m, ci - hw, ci + hw, cj - hw, cj + hw);
  }
  return {{static_cast<double>(cur.i) / n, static_cast<double>(cur.j) / n,
           static_cast<double>(n - cur.i - cur.j) / n}};
}

}  // namespace delbandit
