#pragma once

// Semi-infinite linear program for weighted complex minimax problems
//   minimize max_x w(x) |f(x) + sum_k c_k phi_k(x)|   [subject to sum_k c_k e_k = 1]
// solved in long double by column generation on the dual.

#include <complex>
#include <functional>
#include <vector>

namespace bernstein::detail {

using ld = long double;
using cld = std::complex<ld>;

struct MinimaxProblem {
  int n_coeffs = 0;
  /// Writes phi_0(x) .. phi_{n_coeffs-1}(x).
  std::function<void(ld, ld*)> basis;
  /// Target f; empty means f = 0.
  std::function<cld(ld)> target;
  std::function<ld(ld)> weight;
  /// Optional linear constraint sum_k c_k e_k = 1.
  std::vector<cld> equality;
  /// Ascending pricing grid; local maxima are refined between neighbours.
  std::vector<ld> grid;
  std::vector<ld> seeds;
  ld tol = 1e-10L;
  int max_rounds = 300;
};

struct MinimaxSupport {
  ld x;
  ld theta;
  ld y;
};

struct MinimaxResult {
  std::vector<cld> c;
  ld lower = 0;  ///< dual objective
  ld upper = 0;  ///< refined grid maximum of the final residual
  ld argmax = 0;
  std::vector<MinimaxSupport> support;
  int rounds = 0;
  int pivots = 0;
};

/// Weighted residual modulus at x for coefficients c.
ld minimax_objective(const MinimaxProblem& pr, const std::vector<cld>& c, ld x);

/// Local maxima of the objective on the grid, refined by Brent's method,
/// sorted by decreasing value.
std::vector<std::pair<ld, ld>> refined_maxima(const MinimaxProblem& pr,
                                              const std::vector<cld>& c);

/// NonConvergence if column generation stalls or exceeds max_rounds.
MinimaxResult solve_minimax(const MinimaxProblem& pr);

}  // namespace bernstein::detail
