#pragma once

// Arbitrary-precision arithmetic shared by every module: the Real/Complex
// value types, the working-precision scope, decimal serialization,
// quadrature and monotone bisection.

#include <boost/multiprecision/mpfr.hpp>

#include <functional>
#include <mutex>
#include <string>
#include <string_view>
#include <vector>

#include "bernstein/errors.hpp"

namespace bernstein {

using Real = boost::multiprecision::number<
    boost::multiprecision::mpfr_float_backend<0>,
    boost::multiprecision::et_off>;

inline constexpr unsigned kMinPrecisionBits = 64;

/// Working precision for every Real constructed while the scope is alive.
///
/// MPFR's default precision is process-global, so a scope also holds a
/// process-wide recursive lock: high-precision sections on different threads
/// run one at a time, nested scopes on one thread are fine. Values must not
/// outlive the scope that produced them if a different precision follows.
class PrecisionScope {
 public:
  explicit PrecisionScope(unsigned bits);
  ~PrecisionScope();

  PrecisionScope(const PrecisionScope&) = delete;
  PrecisionScope& operator=(const PrecisionScope&) = delete;

  unsigned bits() const noexcept { return bits_; }

 private:
  std::unique_lock<std::recursive_mutex> lock_;
  unsigned bits_;
  unsigned saved_bits_;
  unsigned saved_digits10_;
};

/// Precision (bits) currently applied to newly constructed Reals.
unsigned working_precision_bits();

/// max(256, 16 n): moment and Gram conditioning grows exponentially in n.
unsigned default_precision_bits(int degree);

/// Actual mantissa bits carried by a value.
unsigned precision_of(const Real& x);

Real parse_real(std::string_view text);
/// Shortest scientific string that parses back to the identical value.
std::string to_decimal(const Real& x);
std::string to_decimal(const Real& x, int significant_digits);

Real const_pi();
Real const_e();
Real const_ln2();
Real infinity();
bool is_finite(const Real& x);

/// Largest power of two not exceeding `2^(-bits * fraction)`.
Real epsilon_power(double fraction);

// ---------------------------------------------------------------------------
// Complex arithmetic on Real parts.

struct Complex {
  Real re;
  Real im;

  Complex() : re(0), im(0) {}
  Complex(Real r) : re(std::move(r)), im(0) {}  // NOLINT(google-explicit-constructor)
  Complex(Real r, Real i) : re(std::move(r)), im(std::move(i)) {}

  Complex& operator+=(const Complex& o) {
    re += o.re;
    im += o.im;
    return *this;
  }
  Complex& operator-=(const Complex& o) {
    re -= o.re;
    im -= o.im;
    return *this;
  }
  Complex& operator*=(const Complex& o) {
    Real r = re * o.re - im * o.im;
    im = re * o.im + im * o.re;
    re = std::move(r);
    return *this;
  }
  Complex& operator*=(const Real& s) {
    re *= s;
    im *= s;
    return *this;
  }
  Complex& operator/=(const Complex& o);
  Complex& operator/=(const Real& s) {
    re /= s;
    im /= s;
    return *this;
  }
};

inline Complex operator+(Complex a, const Complex& b) { return a += b; }
inline Complex operator-(Complex a, const Complex& b) { return a -= b; }
inline Complex operator*(Complex a, const Complex& b) { return a *= b; }
inline Complex operator*(Complex a, const Real& s) { return a *= s; }
inline Complex operator*(const Real& s, Complex a) { return a *= s; }
inline Complex operator/(Complex a, const Complex& b) { return a /= b; }
inline Complex operator/(Complex a, const Real& s) { return a /= s; }
inline Complex operator-(const Complex& a) { return {-a.re, -a.im}; }

inline Complex conj(const Complex& z) { return {z.re, -z.im}; }
inline Real norm(const Complex& z) { return z.re * z.re + z.im * z.im; }
Real abs(const Complex& z);
Real arg(const Complex& z);
/// Principal square root.
Complex sqrt(const Complex& z);
Complex exp(const Complex& z);
Complex log(const Complex& z);
Complex pow(const Complex& z, int k);
inline Complex imag_unit() { return {Real(0), Real(1)}; }

// ---------------------------------------------------------------------------
// Quadrature.

struct QuadratureSpec {
  enum class Scheme { TanhSinh, GaussPanels };

  Scheme scheme = Scheme::TanhSinh;
  Real rel_tol;
  /// Integrand magnitude below which infinite tails are dropped.
  Real tail_cutoff_threshold;
  /// Tanh-sinh level cap, or log2 of the panel-count cap for Gauss panels.
  int max_depth = 12;
  int gauss_order = 20;

  /// rel_tol = 2^(-bits/2), threshold = 2^(-bits/2), gauss_order = max(20, bits/12)
  /// at the working precision.
  static QuadratureSpec standard(Scheme scheme = Scheme::TanhSinh);
  void validate() const;
};

using RealFunction = std::function<Real(const Real&)>;

/// Integral of f over (a, b); either end may be +-infinity. Infinite ranges
/// are truncated at the first doubling point where |f| drops below the tail
/// threshold (relative to the largest magnitude seen, when that exceeds one).
Real integrate(const RealFunction& f, const Real& a, const Real& b,
               const QuadratureSpec& spec);

/// Integral over [breaks.front(), breaks.back()] with the interior break
/// points used as panel boundaries (all finite, non-decreasing).
Real integrate(const RealFunction& f, const std::vector<Real>& breaks,
               const QuadratureSpec& spec);

/// Break points 0, 1, 2, 4, ... below b, then b.
std::vector<Real> dyadic_breaks(const Real& b);

/// x in [lo, hi] with the target bracketed by an interval of width <= tol
/// around x. f must be non-decreasing.
Real bisect_monotone(const RealFunction& f, const Real& target, Real lo, Real hi,
                     const Real& tol);

/// Gauss-Legendre rule on [-1, 1] at the working precision (cached).
struct GaussRule {
  std::vector<Real> nodes;
  std::vector<Real> weights;
};
const GaussRule& gauss_legendre(int order);

/// Golden-section maximization of a unimodal function on [lo, hi].
struct Maximum {
  Real x;
  Real value;
};
Maximum golden_maximize(const RealFunction& f, Real lo, Real hi, const Real& x_tol,
                        int max_iter = 400);

}  // namespace bernstein
