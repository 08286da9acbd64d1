#pragma once

// Explicit upper bounds for E_n(inf, W): the scaled Chebyshev polynomial
// T_n(x / A_n) for rapidly growing weights, and the spectral factor Q_n of a
// truncated majorant series for normally growing ones.

#include <optional>
#include <vector>

#include "bernstein/poly.hpp"
#include "bernstein/weights.hpp"

namespace bernstein {

struct ConstructionOptions {
  /// Zero selects max(256, 16 * 2n) for the Mergelyan chain and 256 otherwise.
  unsigned precision_bits = 0;
  /// Grid size for the HP inequality and factorization residual checks.
  int check_points = 1000;
  /// Largest accepted relative factorization residual.
  double residual_tol = 1e-10;
};

/// log M_k with M_k = sup_{x>0} x^{2k} / W(x), by golden section in t = log x
/// over an expanding bracket. Runs at the working precision.
Real compute_log_mk(const Weight& w, const GrowthClass& cls, int k);
Real compute_mk(const Weight& w, const GrowthClass& cls, int k);
Real compute_mk(const Weight& w, int k);

/// log F(x) for F(x) = sum_k x^{2k} / (2^k M_k), truncated to the given log M_k.
Real log_majorant(const std::vector<Real>& log_m, const Real& x);

struct VidenskiiResult {
  Real c_low;   ///< smallest c with W(x) <= c x^2 F(2x) on the grid
  Real c_high;  ///< smallest c with F(x) <= c W(x) on the grid
  Real tail_bound;  ///< largest relative truncation tail W(x) 2^{1-K} / F(x)
  bool pass = false;
};

/// Two-sided comparison of F and W on samples in [1, X]. Tail error if the
/// truncation estimate exceeds tail_tol at some sample (including 2x).
VidenskiiResult videnskii_check(const Weight& w, int k_terms, const std::vector<Real>& xs,
                                const Real& tail_tol = Real("1e-12"));

struct MergelyanData {
  int n = 0;
  unsigned precision_bits = 0;
  std::vector<Real> M;  ///< M_0 .. M_n
  std::vector<Real> b;  ///< b_k = 1 / (2^k M_k)
  PolyC P2n;            ///< sum_{k<=n} b_k x^{2k}
  PolyC Qn;             ///< |Q_n(x)|^2 = P_2n(x) on the real line
  std::vector<Complex> roots;  ///< zeros of Q_n, all in the lower half-plane
  Real A_2n;
  Real l_n;  ///< A_2n / (2e)
  Real hp_min_ratio;    ///< min of P_2n / F over |x| <= A_2n / e
  Real hp_max_gap;      ///< max of F - P_2n over the same samples
  Real factor_residual; ///< max | |Q_n|^2 - P_2n | / P_2n over the residual grid
  Real log_sup;         ///< log ||Q_n||_{inf, W_1}
  Real log_at_i;        ///< log |Q_n(i)|
  Real bound_log;       ///< log_sup - log_at_i
};

/// Builds M_k, b_k, P_2n and Q_n and checks P_2n >= F/2 on [-A_2n/e, A_2n/e].
/// Class error unless the weight grows normally; Factorization if a zero of
/// P_2n lands within root_tol of the real axis or the residual check fails.
MergelyanData mergelyan_build(const Weight& w, const GrowthClass& cls, int n,
                              const ConstructionOptions& opt = {});
MergelyanData mergelyan_build(const Weight& w, int n, const ConstructionOptions& opt = {});

struct MergelyanRate {
  Real lhs;  ///< -bound_log
  Real rhs;  ///< integral of phi / (x^2 + 1) over [0, l_n]
};

MergelyanRate mergelyan_rate_check(const MergelyanData& data, const Weight& w);

struct ChebBoundData {
  int n = 0;
  Real A_n;
  Real log_numerator;    ///< max(0, log sup_{x >= A_n} |T_n(x/A_n)| / W(x))
  Real log_denominator;  ///< log |T_n(i / A_n)|
  Real bound_log;
  Real reference_log;    ///< -n log(1 + 1/A_n) + max(0, n log(2/e))
};

/// Scaled Chebyshev bound. Class error unless the weight grows rapidly.
ChebBoundData cheb_bound(const Weight& w, const GrowthClass& cls, int n,
                         const ConstructionOptions& opt = {});
ChebBoundData cheb_bound(const Weight& w, int n, const ConstructionOptions& opt = {});

struct UpperBounds {
  GrowthClass cls;
  std::optional<MergelyanData> mergelyan;
  std::optional<ChebBoundData> chebyshev;
  Real best_log;  ///< smaller of the available bound_log values
};

/// Every construction the growth class admits; Class error if none does.
UpperBounds upper_bounds(const Weight& w, int n, const ConstructionOptions& opt = {});

}  // namespace bernstein
