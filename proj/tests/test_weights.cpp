#include <cstdio>
#include <fstream>

#include "bernstein/weights.hpp"
#include "doctest.h"

using namespace bernstein;

namespace {

std::vector<Weight> builtins() {
  return {Weight::rational_log(), Weight::power_log("0.5"), Weight::power("2"),
          Weight::power("1.5"), Weight::exp_power("1")};
}

}  // namespace

TEST_CASE("phi examples") {
  PrecisionScope scope(256);
  Real tol = epsilon_power(0.9);
  CHECK(Weight::power("2").phi(Real(3)) == 9);
  CHECK(abs(Weight::exp_power("1").phi(Real(2)) - exp(Real(2))) < tol);
  Real e = const_e();
  CHECK(abs(Weight::rational_log().phi(e - 2) - (e - 2)) < tol);
  CHECK_THROWS_AS(Weight::power("2").phi(Real(-1)), Error);
  // long double mirror
  CHECK(std::abs(Weight::power("2").phi(3.0L) - 9.0L) < 1e-15L);
  CHECK(std::abs(Weight::power_log("0.5").phi(0.0L) - 0.01L) < 1e-15L);
}

TEST_CASE("log_w_alpha examples") {
  PrecisionScope scope(256);
  Real tol = epsilon_power(0.9);
  Weight w = Weight::power("2");
  CHECK(log_w_alpha(w, Real(0), Real(-1.25)) == w.phi(Real(1.25)));
  CHECK(log_w_alpha(w, Real(1), Real(0)) == w.phi(Real(0)));
  CHECK(abs(log_w_alpha(w, Real(1), Real(1)) - (1 + log(Real(2)) / 2)) < tol);
}

TEST_CASE("a_n examples and inverse property") {
  PrecisionScope scope(256);
  Real tol = epsilon_power(0.9);
  CHECK(abs(Weight::power("2").a_n(Real(4)) - 2) < tol);
  CHECK(abs(Weight::power("1.5").a_n(Real(8)) - 4) < tol);
  CHECK(abs(Weight::exp_power("1").a_n(exp(Real(3))) - 3) < tol);
  CHECK_THROWS_AS(Weight::exp_power("1").a_n(Real(0.5)), Error);
  CHECK_THROWS_AS(Weight::power_log("0.5").a_n(Real(0.001)), Error);
  for (const auto& w : builtins()) {
    for (double x : {0.5, 1.0, 3.0, 17.0, 250.0}) {
      Real fx = w.phi(Real(x));
      Real back = w.phi(w.a_n(fx));
      CHECK(abs(back - fx) <= epsilon_power(0.75) * fx);
    }
  }
}

TEST_CASE("phi is strictly increasing and satisfies the polynomial-growth condition") {
  PrecisionScope scope(256);
  for (const auto& w : builtins()) {
    Real prev = w.phi(Real(0));
    for (int j = 0; j <= 60; ++j) {
      Real x = ldexp(Real(1), j - 10);
      Real v = w.phi(x);
      CHECK(v > prev);
      prev = v;
    }
    // log(x^k / W(x)) = k log x - phi(x) eventually decreases to -infinity.
    for (int k : {1, 5, 20}) {
      Real at40 = k * log(ldexp(Real(1), 40)) - w.phi(ldexp(Real(1), 40));
      Real at60 = k * log(ldexp(Real(1), 60)) - w.phi(ldexp(Real(1), 60));
      CHECK(at60 < at40);
      CHECK(at60 < -100);
    }
  }
}

TEST_CASE("classify_growth on built-in families") {
  PrecisionScope scope(256);
  CHECK(classify_growth(Weight::power("1.5")).kind == GrowthKind::Both);
  CHECK(classify_growth(Weight::power("2")).kind == GrowthKind::Both);
  CHECK(classify_growth(Weight::rational_log()).kind == GrowthKind::Normal);
  CHECK(classify_growth(Weight::power_log("0.5")).kind == GrowthKind::Normal);
  auto ep = classify_growth(Weight::exp_power("1"));
  CHECK(ep.kind == GrowthKind::Rapid);
  CHECK(ep.witness_eps == 1);
  auto p3 = classify_growth(Weight::power("3"));
  CHECK(p3.kind == GrowthKind::Rapid);
  CHECK(p3.witness_eps == 1);
  CHECK(classify_growth(Weight::power("1.5")).witness_eps == Real(0.5));
  CHECK_THROWS_AS(classify_growth(Weight::power("2"), log_grid(Real(1), Real(100), 64)), Error);
}

TEST_CASE("hall_partial examples") {
  PrecisionScope scope(256);
  Real tol = epsilon_power(0.45);
  // phi(t) = t via a tabulated linear weight with unit tail slope.
  Weight lin = Weight::tabulated({0, 1, 2, 3, 4}, {0, 1, 2, 3, 4});
  Real e = const_e();
  CHECK(abs(hall_partial(lin, e) - log(1 + e * e) / 2) < tol);
  CHECK(hall_partial(Weight::power("2"), Real(0)) == 0);
  CHECK(abs(hall_partial(Weight::power("2"), Real(1)) - (1 - const_pi() / 4)) < tol);
  CHECK(hall_partial(Weight::power("2"), Real(1e-30)) < Real(1e-80));
}

TEST_CASE("hall_partial grows without bound along T = 2^k") {
  PrecisionScope scope(256);
  for (const auto& w : builtins()) {
    int top = w.family() == Family::ExpPower ? 8 : 40;
    Real prev = 0;
    Real first = hall_partial(w, Real(1));
    for (int k = 0; k <= top; k += 4) {
      Real v = hall_partial(w, ldexp(Real(1), k));
      CHECK(v >= prev);
      prev = v;
    }
    CHECK(prev > 10 * first);
  }
}

TEST_CASE("weight parsing") {
  PrecisionScope scope(256);
  CHECK(Weight::parse("power:2").id() == "power:2");
  CHECK(Weight::parse("powerlog:0.5").id() == "powerlog:0.5+0.01");
  CHECK(Weight::parse("rationallog").family() == Family::RationalLog);
  CHECK(Weight::parse("exppower:1").family() == Family::ExpPower);
  for (const char* bad : {"power", "power:1", "power:x", "exppower:0", "powerlog:-1",
                          "gauss:2", "rationallog:3", "table:/nonexistent/file"}) {
    CHECK_THROWS_AS(Weight::parse(bad), Error);
  }
}

TEST_CASE("tabulated weights") {
  PrecisionScope scope(256);
  const char* path = "test_weights_table.txt";
  {
    std::ofstream out(path);
    out << "# x phi\n0 0.5\n1 1.5\n2, 4.5\n3 9.5\n4 16.5\n";
  }
  Weight w = Weight::parse(std::string("table:") + path);
  CHECK(w.family() == Family::Tabulated);
  CHECK(w.id().rfind("table:", 0) == 0);
  CHECK(w.phi(Real(2)) == Real(4.5));
  CHECK(w.phi(Real(0)) == Real(0.5));
  Real prev = w.phi(Real(0));
  for (int k = 1; k < 200; ++k) {
    Real v = w.phi(Real(k) / 20);
    CHECK(v > prev);
    prev = v;
  }
  CHECK(abs(w.phi(Real(2.5)) - Real(w.phi(2.5L))) < Real(1e-15));
  CHECK(abs(w.phi(w.a_n(Real(7))) - 7) < epsilon_power(0.75));
  std::remove(path);
  CHECK_THROWS_AS(Weight::tabulated({0, 1, 1, 2}, {0, 1, 2, 3}), Error);
  CHECK_THROWS_AS(Weight::tabulated({1, 2, 3, 4}, {0, 1, 2, 3}), Error);
}
