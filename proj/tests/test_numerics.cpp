#include <algorithm>
#include <random>

#include "bernstein/numerics.hpp"
#include "bernstein/poly.hpp"
#include "doctest.h"

using namespace bernstein;

namespace {

Real rel_err(const Real& a, const Real& b) { return abs(a - b) / abs(b); }

}  // namespace

TEST_CASE("precision scope sets and restores working precision") {
  unsigned outer = working_precision_bits();
  {
    PrecisionScope scope(512);
    CHECK(working_precision_bits() >= 512);
    {
      PrecisionScope inner(128);
      CHECK(working_precision_bits() >= 128);
      CHECK(working_precision_bits() < 512);
    }
    CHECK(working_precision_bits() >= 512);
  }
  CHECK(working_precision_bits() == outer);
  CHECK_THROWS_AS(PrecisionScope(32), Error);
  CHECK(default_precision_bits(4) == 256);
  CHECK(default_precision_bits(64) == 1024);
}

TEST_CASE("decimal strings round-trip exactly") {
  PrecisionScope scope(256);
  Real third = Real(1) / 3;
  CHECK(parse_real(to_decimal(third)) == third);
  Real pi = const_pi();
  CHECK(parse_real(to_decimal(pi)) == pi);
  CHECK(to_decimal(Real(0)) == "0");
  CHECK(to_decimal(Real(-2.5), 10) == "-2.5e0");
  CHECK_THROWS_AS(parse_real("abc"), Error);
}

TEST_CASE("integrate: polynomial, rational and Gaussian") {
  PrecisionScope scope(256);
  for (auto scheme : {QuadratureSpec::Scheme::TanhSinh, QuadratureSpec::Scheme::GaussPanels}) {
    auto spec = QuadratureSpec::standard(scheme);
    Real v = integrate([](const Real& x) { return x * x; }, Real(0), Real(1), spec);
    CHECK(rel_err(v, Real(1) / 3) < spec.rel_tol);

    Real e = const_e();
    Real w = integrate([](const Real& x) { return x / (1 + x * x); }, Real(0), e, spec);
    CHECK(rel_err(w, log(1 + e * e) / 2) < spec.rel_tol);

    Real g = integrate([](const Real& x) { return exp(-x * x); }, -infinity(), infinity(), spec);
    CHECK(rel_err(g, sqrt(const_pi())) < spec.rel_tol);
  }
}

TEST_CASE("integrate: polynomials of degree <= 20 on finite intervals") {
  PrecisionScope scope(256);
  auto spec = QuadratureSpec::standard();
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> coef(-1, 1);
  for (int trial = 0; trial < 5; ++trial) {
    std::vector<Real> c(21);
    for (auto& x : c) x = coef(rng);
    auto f = [&](const Real& x) {
      Real acc = 0;
      for (size_t k = c.size(); k-- > 0;) acc = acc * x + c[k];
      return acc;
    };
    Real a = -0.5, b = 1.75;
    Real exact = 0;
    for (size_t k = 0; k < c.size(); ++k) {
      exact += c[k] * (pow(b, k + 1) - pow(a, k + 1)) / (k + 1);
    }
    Real v = integrate(f, a, b, spec);
    CHECK(abs(v - exact) <= spec.rel_tol * abs(exact));
  }
}

TEST_CASE("integrate validates its spec") {
  PrecisionScope scope(256);
  auto spec = QuadratureSpec::standard();
  spec.rel_tol = 2;
  CHECK_THROWS_AS(integrate([](const Real& x) { return x; }, Real(0), Real(1), spec), Error);
  spec = QuadratureSpec::standard();
  spec.tail_cutoff_threshold = Real(1e-3);
  CHECK_THROWS_AS(integrate([](const Real& x) { return x; }, Real(0), Real(1), spec), Error);
}

TEST_CASE("integrate reports non-convergence") {
  PrecisionScope scope(256);
  auto spec = QuadratureSpec::standard(QuadratureSpec::Scheme::GaussPanels);
  spec.max_depth = 2;
  auto f = [](const Real& x) { return sin(1 / (x + Real(1e-30))); };
  CHECK_THROWS_AS(integrate(f, Real(0), Real(1), spec), Error);
}

TEST_CASE("bisect_monotone examples") {
  PrecisionScope scope(256);
  Real tol = epsilon_power(0.75);
  Real x = bisect_monotone([](const Real& t) { return t * t; }, Real(4), Real(0), Real(10), tol);
  CHECK(abs(x - 2) <= tol);
  x = bisect_monotone([](const Real& t) { return t * sqrt(t); }, Real(8), Real(0), Real(100), tol);
  CHECK(abs(x - 4) <= tol);
  auto f = [](const Real& t) { return exp(t) - 1; };
  x = bisect_monotone(f, Real(1), Real(0), Real(2), tol);
  CHECK(abs(x - const_ln2()) <= tol);
  CHECK(x >= 0);
  CHECK(x <= 2);
  CHECK(f(x - tol) <= 1);
  CHECK(f(x + tol) >= 1);
  try {
    bisect_monotone(f, Real(100), Real(0), Real(2), tol);
    FAIL("expected BracketInvalid");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::BracketInvalid);
  }
}

TEST_CASE("golden_maximize finds interior and boundary maxima") {
  PrecisionScope scope(256);
  Real tol = epsilon_power(0.33);
  auto m = golden_maximize([](const Real& t) { return -(t - 1) * (t - 1); }, Real(-3), Real(4), tol);
  CHECK(abs(m.x - 1) < 10 * tol);
  m = golden_maximize([](const Real& t) { return t; }, Real(0), Real(2), tol);
  CHECK(m.x == 2);
}

TEST_CASE("complex helpers") {
  PrecisionScope scope(256);
  Complex i = imag_unit();
  Complex s = sqrt(Complex(Real(-4)));
  CHECK(abs(s - Complex(Real(0), Real(2))) < epsilon_power(0.9));
  CHECK(abs(pow(i, 4) - Complex(Real(1))) == 0);
  Complex e = exp(Complex(Real(0), const_pi()));
  CHECK(abs(e + Complex(Real(1))) < epsilon_power(0.9));
  CHECK(abs(log(i) - Complex(Real(0), const_pi() / 2)) < epsilon_power(0.9));
}

TEST_CASE("find_roots examples") {
  PrecisionScope scope(256);
  Real tight = epsilon_power(0.4);
  auto sorted_by_im = [](std::vector<Complex> r) {
    std::sort(r.begin(), r.end(), [](const Complex& a, const Complex& b) {
      return a.im < b.im || (a.im == b.im && a.re < b.re);
    });
    return r;
  };

  auto r = sorted_by_im(find_roots(PolyC::from_real({Real(1), Real(0), Real(1)})));
  REQUIRE(r.size() == 2);
  CHECK(abs(r[0] - Complex(Real(0), Real(-1))) < tight);
  CHECK(abs(r[1] - Complex(Real(0), Real(1))) < tight);

  r = find_roots(PolyC::from_real({Real(2), Real(-3), Real(1)}));
  std::sort(r.begin(), r.end(), [](const Complex& a, const Complex& b) { return a.re < b.re; });
  CHECK(abs(r[0] - Complex(Real(1))) < tight);
  CHECK(abs(r[1] - Complex(Real(2))) < tight);

  r = sorted_by_im(find_roots(PolyC::from_real({Real(1), Real(0), Real(2)})));
  Real s = 1 / sqrt(Real(2));
  CHECK(abs(r[0] - Complex(Real(0), -s)) < tight);
  CHECK(abs(r[1] - Complex(Real(0), s)) < tight);

  CHECK_THROWS_AS(find_roots(PolyC::from_real({Real(3)})), Error);
}

TEST_CASE("find_roots reconstructs random polynomials up to degree 32") {
  PrecisionScope scope(256);
  std::mt19937 rng(11);
  std::uniform_real_distribution<double> coef(-1, 1);
  const Real root_tol = epsilon_power(0.5);
  for (int degree : {1, 5, 12, 20, 32}) {
    std::vector<Complex> c(degree + 1);
    for (auto& x : c) x = Complex(Real(coef(rng)), Real(coef(rng)));
    PolyC p(c);
    auto roots = find_roots(p);
    REQUIRE(static_cast<int>(roots.size()) == degree);
    PolyC rebuilt({p.leading()});
    for (const auto& z : roots) rebuilt = rebuilt * PolyC({-z, Complex(Real(1))});
    Real top = 0;
    for (const auto& x : p.coeffs()) top = std::max(top, abs(x));
    for (int k = 0; k <= degree; ++k) {
      CHECK(abs(rebuilt.coeffs()[k] - p.coeffs()[k]) <= 10 * root_tol * top);
    }
    for (const auto& z : roots) CHECK(root_residual(p, z) <= root_tol);
  }
}

TEST_CASE("find_roots handles zero roots and wide dynamic range") {
  PrecisionScope scope(256);
  // x^2 (x^2 + 1)
  auto r = find_roots(PolyC::from_real({Real(0), Real(0), Real(1), Real(0), Real(1)}));
  CHECK(r.size() == 4);
  int zeros = 0;
  for (const auto& z : r) zeros += abs(z) == 0;
  CHECK(zeros == 2);
  // Roots spread over 2^-20 .. 2^20.
  PolyC p({Complex(Real(1))});
  for (int k = -20; k <= 20; k += 5) p = p * PolyC({Complex(-ldexp(Real(1), k)), Complex(Real(1))});
  auto rr = find_roots(p);
  for (const auto& z : rr) CHECK(root_residual(p, z) <= epsilon_power(0.5));
}

TEST_CASE("basis conversions round-trip") {
  PrecisionScope scope(256);
  PolyC p({Complex(Real(1), Real(2)), Complex(Real(-3)), Complex(Real(0.5), Real(-1)),
           Complex(Real(2))});
  for (Real a : {Real(1), Real(3.5), Real(0.25)}) {
    PolyC c = p.to_chebyshev(a);
    CHECK(c.basis() == PolyBasis::ChebyshevScaled);
    PolyC back = c.to_monomial();
    for (int k = 0; k <= p.degree(); ++k) {
      CHECK(abs(back.coeffs()[k] - p.coeffs()[k]) < epsilon_power(0.5));
    }
    Complex z(Real(0.3), Real(1.1));
    CHECK(abs(c(z) - p(z)) < epsilon_power(0.5));
  }
  // T_3(x / 2) = 4 (x/2)^3 - 3 (x/2) = x^3/2 - 3x/2
  PolyC t3({Complex(), Complex(), Complex(), Complex(Real(1))}, PolyBasis::ChebyshevScaled, Real(2));
  PolyC m = t3.to_monomial();
  CHECK(abs(m.coeffs()[3] - Complex(Real(0.5))) == 0);
  CHECK(abs(m.coeffs()[1] - Complex(Real(-1.5))) == 0);
  CHECK(PolyC({Complex(), Complex()}).is_zero());
}
