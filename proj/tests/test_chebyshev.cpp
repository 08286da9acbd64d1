#include "bernstein/chebyshev.hpp"
#include "doctest.h"

using namespace bernstein;

namespace {

Complex recurrence(int n, const Complex& z) {
  Complex t0(Real(1));
  Complex t1 = z;
  if (n == 0) return t0;
  for (int k = 1; k < n; ++k) {
    Complex t2 = Real(2) * z * t1 - t0;
    t0 = t1;
    t1 = t2;
  }
  return t1;
}

}  // namespace

TEST_CASE("t_eval examples") {
  PrecisionScope scope(256);
  Real tol = epsilon_power(0.8);
  CHECK(abs(t_eval(2, imag_unit()) - Complex(Real(-3))) < tol);
  CHECK(abs(t_eval(5, Complex(Real(1))) - Complex(Real(1))) < tol);
  Complex r = recurrence(10, Complex(Real(2)));
  CHECK(abs(t_eval(10, Complex(Real(2))) - r) < tol * abs(r));
  CHECK(t_eval(3, Complex(Real(-2))).re < 0);
}

TEST_CASE("t_eval agrees with the recurrence for n <= 128, |z| <= 10") {
  PrecisionScope scope(256);
  Real tol = epsilon_power(0.5);
  const Complex points[] = {Complex(Real(0.3)),           Complex(Real(-0.99)),
                            Complex(Real(1.5)),           Complex(Real(-10)),
                            Complex(Real(0), Real(1)),    Complex(Real(0.2), Real(0.05)),
                            Complex(Real(-3), Real(7)),   Complex(Real(6), Real(-8))};
  for (int n : {0, 1, 2, 7, 32, 64, 127, 128}) {
    for (const auto& z : points) {
      Complex a = t_eval(n, z);
      Complex b = recurrence(n, z);
      CHECK(abs(a - b) <= tol * std::max(abs(b), Real(1)));
      if (abs(b) > 0) CHECK(abs(t_log_abs(n, z) - log(abs(b))) <= tol * 1000);
    }
  }
}

TEST_CASE("|T_n| <= 1 on [-1, 1]") {
  PrecisionScope scope(128);
  for (int n = 0; n <= 128; n += 8) {
    for (int k = 0; k < 1000; ++k) {
      Real x = Real(2 * k - 999) / 999;
      CHECK(abs(t_eval(n, Complex(x))) <= 1 + epsilon_power(0.9));
    }
  }
}

TEST_CASE("chebyshev_poly matches t_eval") {
  PrecisionScope scope(256);
  PolyC t = chebyshev_poly(6, Real(3));
  Complex z(Real(0.4), Real(2));
  CHECK(abs(t(z) - t_eval(6, z / Real(3))) < epsilon_power(0.8));
  PolyC m = t.to_monomial();
  CHECK(abs(m(z) - t_eval(6, z / Real(3))) < epsilon_power(0.6));
}

TEST_CASE("lemma1_check examples") {
  PrecisionScope scope(256);
  auto r = lemma1_check(2, Real(1));
  CHECK(abs(r.lhs - 3) < epsilon_power(0.8));
  CHECK(abs(r.rhs - 2) < epsilon_power(0.8));
  CHECK(r.pass);
  r = lemma1_check(2, Real(1e12));
  CHECK(abs(r.lhs - 1) < Real(1e-20));
  CHECK(abs(r.rhs - Real(0.5)) < Real(1e-10));
  CHECK(r.pass);
  {
    PrecisionScope wide(512);
    CHECK(lemma1_check(64, Real(0.1)).pass);
  }
  CHECK_THROWS_AS(lemma1_check(3, Real(1)), Error);
}

TEST_CASE("lemma1_check passes on the full sweep") {
  PrecisionScope scope(256);
  for (int n = 2; n <= 64; n += 2) {
    for (int k = -3; k <= 3; ++k) CHECK(lemma1_check(n, pow(Real(10), k)).pass);
  }
}

TEST_CASE("lemma2_sup bounds") {
  PrecisionScope scope(256);
  Weight p2 = Weight::power("2");
  Weight e1 = Weight::exp_power("1");
  auto r = lemma2_sup(p2, 16);
  CHECK(r.value <= pow(2 / const_e(), 16));
  r = lemma2_sup(e1, 8);
  CHECK(r.value <= pow(2 / const_e(), 8));
  // At x = A_n the objective equals T_n(1) / W(A_n) = e^{-n}.
  CHECK(r.value >= exp(Real(-8)) * (1 - epsilon_power(0.5)));
  CHECK_THROWS_AS(lemma2_sup(Weight::rational_log(), 8), Error);
  auto cls = classify_growth(p2);
  for (int n = 8; n <= 64; n += 8) {
    CHECK(lemma2_sup(p2, cls, n).value <= pow(2 / const_e(), n));
  }
}

TEST_CASE("tcheb_inequality_check examples") {
  PrecisionScope scope(256);
  std::vector<Real> xs{Real(1.01), Real(2), Real(-3), Real(5)};
  CHECK(tcheb_inequality_check(chebyshev_poly(5, Real(1)), 5, xs));
  std::vector<Real> xn(9);
  xn[8] = 1;
  CHECK(tcheb_inequality_check(PolyC::from_real(xn), 8, {Real(2)}));
  CHECK(tcheb_inequality_check(PolyC::from_real({Real(1)}), 3, {Real(5)}));
  CHECK_THROWS_AS(tcheb_inequality_check(PolyC::from_real({Real(2)}), 3, {Real(5)}), Error);
  // (T_1 + T_3) / 2 stays within [-1, 1].
  PolyC mix({Complex(), Complex(Real(0.5)), Complex(), Complex(Real(0.5))},
            PolyBasis::ChebyshevScaled, Real(1));
  CHECK(tcheb_inequality_check(mix, 3, xs));
}
