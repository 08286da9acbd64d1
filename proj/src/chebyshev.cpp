#include "bernstein/chebyshev.hpp"

#include <cmath>

namespace bernstein {

namespace {

bool on_interval(const Complex& z) { return z.im == 0 && abs(z.re) <= 1; }

// z + sqrt(z^2 - 1) on the branch with modulus >= 1.
Complex joukowski_inverse(const Complex& z) {
  Complex s = sqrt(z * z - Complex(Real(1)));
  Complex a = z + s;
  Complex b = z - s;
  return abs(a) >= abs(b) ? a : b;
}

}  // namespace

Complex t_eval(int n, const Complex& z) {
  if (n < 0) fail(ErrorCode::Domain, "t_eval: degree must be non-negative");
  if (on_interval(z)) return Complex(Real(cos(n * acos(z.re))));
  if (z.im == 0) {
    Real v = cosh(n * acosh(abs(z.re)));
    if (z.re < 0 && n % 2 == 1) v = -v;
    return Complex(v);
  }
  Complex w = joukowski_inverse(z);
  Complex wn = pow(w, n);
  return (wn + Complex(Real(1)) / wn) / Real(2);
}

Real t_log_abs(int n, const Complex& z) {
  if (n < 0) fail(ErrorCode::Domain, "t_log_abs: degree must be non-negative");
  if (on_interval(z)) return log(abs(cos(n * acos(z.re))));
  Complex w = joukowski_inverse(z);
  Complex lw = log(w);
  // T_n = w^n (1 + w^{-2n}) / 2 with |w^{-2n}| <= 1.
  Complex tail = exp(Complex(Real(-2 * n)) * lw);
  return n * lw.re + log(abs(Complex(Real(1)) + tail)) - const_ln2();
}

PolyC chebyshev_poly(int n, const Real& scale) {
  if (n < 0) fail(ErrorCode::Domain, "chebyshev_poly: degree must be non-negative");
  std::vector<Complex> c(n + 1);
  c[n] = Complex(Real(1));
  return PolyC(std::move(c), PolyBasis::ChebyshevScaled, scale);
}

Lemma1Result lemma1_check(int n, const Real& a) {
  if (n <= 0 || n % 2 != 0) fail(ErrorCode::Domain, "lemma1_check: n must be even and positive");
  if (!(a > 0)) fail(ErrorCode::Domain, "lemma1_check: a must be positive");
  Lemma1Result r;
  r.log_lhs = t_log_abs(n, Complex(Real(0), 1 / a));
  r.log_rhs = n * log(1 / a + 1) - const_ln2();
  r.lhs = exp(r.log_lhs);
  r.rhs = exp(r.log_rhs);
  r.pass = r.log_lhs >= r.log_rhs - epsilon_power(0.5) * (1 + abs(r.log_rhs));
  return r;
}

Lemma2Result lemma2_sup(const Weight& w, const GrowthClass& cls, int n) {
  if (!cls.rapid()) {
    fail(ErrorCode::Class, std::string("lemma2_sup: weight ") + w.id() + " is " +
                               growth_kind_name(cls.kind) + ", not rapidly growing");
  }
  if (n < 1) fail(ErrorCode::Domain, "lemma2_sup: n must be positive");
  const Real A = w.a_n(Real(n));
  if (A < cls.witness_A) {
    fail(ErrorCode::Precondition, "lemma2_sup: A_n = " + to_decimal(A, 8) +
                                      " lies below the growth witness " +
                                      to_decimal(cls.witness_A, 8));
  }
  auto objective = [&](const Real& x) { return t_log_abs(n, Complex(x / A)) - w.phi(x); };

  const Real ratio = 1 + Real(1) / (4 * n);
  Real best_x = A;
  Real best = objective(A);
  Real x = A;
  Real last = best;
  size_t best_k = 0;
  std::vector<Real> xs{A};
  for (size_t k = 1; k < 1000000; ++k) {
    x *= ratio;
    Real v = objective(x);
    xs.push_back(x);
    if (v > best) {
      best = v;
      best_x = x;
      best_k = k;
    }
    // Rapid growth makes the objective eventually decrease for good.
    if (v < last && v < best - 60) break;
    last = v;
  }
  Real lo = best_k == 0 ? xs[0] : xs[best_k - 1];
  Real hi = best_k + 1 < xs.size() ? xs[best_k + 1] : xs[best_k];
  Maximum m = golden_maximize(objective, lo, hi, epsilon_power(1.0 / 3) * hi);
  if (m.value > best) {
    best = m.value;
    best_x = m.x;
  }
  return Lemma2Result{exp(best), best, best_x, A};
}

Lemma2Result lemma2_sup(const Weight& w, int n) { return lemma2_sup(w, classify_growth(w), n); }

bool tcheb_inequality_check(const PolyC& p, int n, const std::vector<Real>& xs) {
  const Real slack = epsilon_power(0.5);
  const int samples = 4096;
  for (int k = 0; k <= samples; ++k) {
    Real x = Real(2 * k - samples) / samples;
    if (abs(p(x)) > 1 + slack) {
      fail(ErrorCode::Precondition,
           "tcheb_inequality_check: |p| exceeds 1 on [-1, 1] at x = " + to_decimal(x, 8));
    }
  }
  bool ok = true;
  for (const auto& x : xs) {
    if (abs(x) <= 1) fail(ErrorCode::Domain, "tcheb_inequality_check: samples need |x| > 1");
    Real t = abs(t_eval(n, Complex(x)));
    if (abs(p(x)) > t + slack * (1 + t)) ok = false;
  }
  return ok;
}

}  // namespace bernstein
