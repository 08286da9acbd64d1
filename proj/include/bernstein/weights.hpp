#pragma once

// Weights W(x) = exp(phi(|x|)) with phi positive-ish, continuous and
// increasing, plus the scale points A_n = phi^{-1}(n) and growth classes.

#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "bernstein/numerics.hpp"

namespace bernstein {

enum class Family { RationalLog, PowerLog, Power, ExpPower, Tabulated };

const char* family_name(Family f) noexcept;

class Weight {
 public:
  /// phi(x) = x / log(2 + x)
  static Weight rational_log();
  /// phi(x) = x log^nu(2 + x) + phi0, nu > -1
  static Weight power_log(std::string_view nu, std::string_view phi0 = "0.01");
  /// phi(x) = x^nu, nu > 1
  static Weight power(std::string_view nu);
  /// phi(x) = exp(x^nu), nu > 0
  static Weight exp_power(std::string_view nu);
  /// Monotone piecewise-cubic phi through (xs, phis). xs[0] must be 0 and both
  /// columns strictly increasing. Past the last sample phi continues as a
  /// power law with exponent max(1, last log-log slope).
  static Weight tabulated(std::vector<long double> xs, std::vector<long double> phis);
  static Weight load_table(const std::string& path);

  /// `power:2`, `powerlog:0.5`, `rationallog`, `exppower:1`, `table:<path>`.
  static Weight parse(std::string_view spec);

  Family family() const;
  /// Stable cache key; includes every parameter that changes phi.
  const std::string& id() const;
  /// Family exponent as written (empty for RationalLog and tables).
  const std::string& nu_text() const;
  long double nu() const;

  Real phi(const Real& x) const;
  long double phi(long double x) const;
  Real phi0() const { return phi(Real(0)); }

  /// A_n with phi(A_n) = n; closed forms for Power and ExpPower.
  Real a_n(const Real& n) const;

  /// Points where phi is only C^1 (table knots); empty for closed forms.
  const std::vector<long double>& knots() const;

 private:
  struct Impl;
  explicit Weight(std::shared_ptr<const Impl> impl) : impl_(std::move(impl)) {}
  std::shared_ptr<const Impl> impl_;
};

/// Break points on [a, b] for integrating expressions in phi: a, the dyadic
/// points 2^k inside (a, b), every knot of phi inside (a, b), and b.
std::vector<Real> weight_breaks(const Weight& w, const Real& a, const Real& b);

/// log W_alpha(x) = phi(|x|) + (alpha/2) log(x^2 + 1).
Real log_w_alpha(const Weight& w, const Real& alpha, const Real& x);

enum class GrowthKind { Unknown, Normal, Rapid, Both };

const char* growth_kind_name(GrowthKind k) noexcept;

struct GrowthClass {
  GrowthKind kind = GrowthKind::Unknown;
  /// Start of the sampled range on which the asserted tests pass.
  Real witness_A = 0;
  /// Largest epsilon in {1, 1/2, 1/4, 1/8} with phi(x)/x^{1+eps} non-decreasing.
  Real witness_eps = 0;

  bool normal() const { return kind == GrowthKind::Normal || kind == GrowthKind::Both; }
  bool rapid() const { return kind == GrowthKind::Rapid || kind == GrowthKind::Both; }
};

/// n-point log-spaced grid on [lo, hi].
std::vector<Real> log_grid(const Real& lo, const Real& hi, int points);

/// Sampled classification. The witness must lie in the first half of the
/// grid, so a class is only claimed when it holds on at least half of it.
GrowthClass classify_growth(const Weight& w, const std::vector<Real>& grid);
GrowthClass classify_growth(const Weight& w);

/// Integral of phi(t) / (1 + t^2) over [0, T].
Real hall_partial(const Weight& w, const Real& T);

}  // namespace bernstein
