#pragma once

#include <utility>
#include <vector>

#include "bernstein/weights.hpp"

namespace bernstein {

/// R(n) = integral over (0, 1] of min(phi(1/x), n), split at x = 1/A_n.
struct RateValue {
  int n = 0;
  Real R;
  Real tail_part;     ///< n / A_n
  Real bulk_part;     ///< integral of phi(u) / u^2 over [1, A_n]
  Real poisson_part;  ///< integral of phi(x) / (x^2 + 1) over [0, A_n]
  Real a_n;           ///< phi^{-1}(n), or 0 when n < phi(0)
  /// n < phi(1): min(phi(1/x), n) = n on the whole interval, R = n and the
  /// bulk part is empty.
  bool below_unit_scale = false;
};

RateValue rate_integral(const Weight& w, int n);

/// Closed-form comparison quantity of the family:
/// log log(n + e), log^{nu+1} n, n^{1 - 1/nu} or n / log^{1/nu} n.
Real corollary_rate(const Weight& w, int n);

enum class Lemma4Direction { AtLeast, AtMost, Both };

struct Lemma4Value {
  Real a;
  Real integral;     ///< integral of phi(x) / (x^2 + 1) over [0, a]
  Real scale;        ///< phi(a) / a
  Real ratio;        ///< integral / scale
  Lemma4Direction direction;
};

/// Normal weights satisfy integral >= c phi(a)/a, rapid ones integral <= C phi(a)/a.
Lemma4Value lemma4_compare(const Weight& w, const GrowthClass& cls, const Real& a);

struct Lemma4Sweep {
  std::vector<Lemma4Value> points;
  Real c_low;   ///< smallest ratio over the sweep
  Real c_high;  ///< largest ratio over the sweep
  Real slope;   ///< log-log slope of the ratio over the upper half of the sweep
  bool pass;    ///< the ratio does not decay (>=) or grow (<=) along the sweep
};

Lemma4Sweep lemma4_sweep(const Weight& w, const GrowthClass& cls, const std::vector<Real>& as);

struct SlopeFit {
  Real slope;
  Real intercept;
  Real r_squared;
};

/// Least-squares slope of log(value) against log(n); at least 4 points.
SlopeFit fit_loglog_slope(const std::vector<std::pair<Real, Real>>& points);

}  // namespace bernstein
