#include <doctest.h>

#include <algorithm>
#include <vector>

#include "bernstein/chebyshev.hpp"
#include "bernstein/constructions.hpp"
#include "bernstein/extremal.hpp"

using namespace bernstein;

namespace {

Real rel(const Real& a, const Real& b) { return abs(a - b) / abs(b); }

}  // namespace

TEST_CASE("M_k for the Gaussian weight") {
  PrecisionScope scope(256);
  const Weight w = Weight::power("2");
  const GrowthClass cls = classify_growth(w);
  CHECK(compute_mk(w, cls, 0) == 1);
  CHECK(rel(compute_mk(w, cls, 1), exp(Real(-1))) < Real("1e-40"));
  for (int k = 2; k <= 24; ++k) {
    const Real expect = pow(Real(k) / const_e(), k);
    CHECK(rel(compute_mk(w, cls, k), expect) < Real("1e-40"));
  }
}

TEST_CASE("M_0 is the boundary limit e^{-phi(0)}") {
  PrecisionScope scope(256);
  const Weight w = Weight::power_log("0.5", "0.01");
  const GrowthClass cls = classify_growth(w);
  REQUIRE(cls.normal());
  CHECK(rel(compute_mk(w, cls, 0), exp(Real("-0.01"))) < Real("1e-40"));
  // Interior maxima for k >= 1 on the slow families.
  const Weight r = Weight::rational_log();
  Real prev = compute_log_mk(r, classify_growth(r), 1);
  for (int k = 2; k <= 8; ++k) {
    Real cur = compute_log_mk(r, classify_growth(r), k);
    CHECK(cur > prev);
    prev = cur;
  }
}

TEST_CASE("M_k needs normal growth") {
  PrecisionScope scope(256);
  const Weight w = Weight::exp_power("1");
  try {
    compute_mk(w, 1);
    FAIL("expected a class error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::Class);
  }
}

TEST_CASE("majorant series at small arguments") {
  PrecisionScope scope(256);
  const Weight w = Weight::power("2");
  const GrowthClass cls = classify_growth(w);
  std::vector<Real> log_m;
  for (int k = 0; k < 40; ++k) log_m.push_back(compute_log_mk(w, cls, k));
  const Real b0 = exp(-log_m[0]);
  CHECK(rel(exp(log_majorant(log_m, Real(0))), b0) < Real("1e-60"));
  CHECK(b0 >= 1);
  CHECK(exp(log_majorant(log_m, Real(1))) >= b0);
}

TEST_CASE("two-sided majorant comparison on [1, 8]") {
  PrecisionScope scope(256);
  const Weight w = Weight::power("2");
  std::vector<Real> xs;
  for (int j = 0; j <= 56; ++j) xs.push_back(1 + Real(j) / 8);
  const VidenskiiResult r = videnskii_check(w, 400, xs);
  CHECK(r.pass);
  CHECK(r.c_high > 0);
  CHECK(r.c_low > 0);
  CHECK(r.tail_bound < Real("1e-12"));

  try {
    videnskii_check(w, 20, xs);
    FAIL("expected a tail error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::Tail);
  }
}

TEST_CASE("degree one spectral factor by hand") {
  const Weight w = Weight::power("2");
  const MergelyanData d = mergelyan_build(w, 1);
  PrecisionScope scope(d.precision_bits);
  REQUIRE(d.roots.size() == 1);
  const Real b0 = d.b[0];
  const Real b1 = d.b[1];
  CHECK(b0 >= 1);
  const Complex z(Real(0), -sqrt(b0 / b1));
  CHECK(abs(d.roots[0] - z) < Real("1e-60"));
  REQUIRE(d.Qn.degree() == 1);
  CHECK(abs(d.Qn.coeffs()[1] - Complex(sqrt(b1))) < Real("1e-60"));
  CHECK(abs(d.Qn.coeffs()[0] + sqrt(b1) * z) < Real("1e-60"));
  for (const char* xs : {"-3", "0", "0.5", "7"}) {
    const Real x(xs);
    CHECK(rel(norm(d.Qn(x)), b1 * x * x + b0) < Real("1e-60"));
  }
}

TEST_CASE("Mergelyan chain for the Gaussian weight") {
  const Weight w = Weight::power("2");
  const GrowthClass cls = classify_growth(w);
  RecurrenceCache cache;
  std::vector<Real> ratios;
  for (int n = 8; n <= 16; n += 2) {
    CAPTURE(n);
    const MergelyanData d = mergelyan_build(w, cls, n);
    PrecisionScope scope(d.precision_bits);

    CHECK(d.hp_min_ratio >= Real("0.5"));
    CHECK(d.hp_max_gap >= 0);
    CHECK(d.hp_max_gap <= Real("0.5"));
    CHECK(d.factor_residual <= Real("1e-10"));
    CHECK(static_cast<int>(d.roots.size()) == n);
    for (const Complex& z : d.roots) CHECK(z.im <= -epsilon_power(0.5));

    for (int k = 0; k <= n; ++k) {
      CHECK(d.M[k] > 0);
      const Real cap = exp(Real(2 * n)) / (pow(Real(2), k) * pow(d.A_2n, 2 * k));
      CHECK(d.b[k] <= cap * (1 + epsilon_power(0.5)));
    }

    SolverOptions opt;
    opt.cache = &cache;
    const ErrorRecord e = en_uniform(w, n, opt);
    CHECK(e.log_value <= d.bound_log);

    const MergelyanRate r = mergelyan_rate_check(d, w);
    CHECK(r.rhs > 0);
    ratios.push_back(r.lhs / r.rhs);
  }
  const Real lo = *std::min_element(ratios.begin(), ratios.end());
  const Real hi = *std::max_element(ratios.begin(), ratios.end());
  CHECK(lo > 0);
  CHECK(hi / lo <= 3);
}

TEST_CASE("Mergelyan chain on a slowly growing weight") {
  const Weight w = Weight::rational_log();
  for (int n : {4, 8}) {
    CAPTURE(n);
    const MergelyanData d = mergelyan_build(w, n);
    PrecisionScope scope(d.precision_bits);
    CHECK(d.hp_min_ratio >= Real("0.5"));
    CHECK(d.factor_residual <= Real("1e-10"));
    CHECK(d.bound_log < 0);
    const ErrorRecord e = en_uniform(w, n);
    CHECK(e.log_value <= d.bound_log);
  }
}

TEST_CASE("l_n from the closed form and from bisection") {
  PrecisionScope scope(256);
  const Weight w = Weight::power("2");
  for (int n : {8, 12, 16}) {
    const MergelyanData d = mergelyan_build(w, n);
    const Real target = 2 * n;
    const Real A = bisect_monotone([&](const Real& x) { return w.phi(x); }, target, Real(0),
                                   Real(64), epsilon_power(0.5));
    CHECK(rel(d.l_n, A / (2 * const_e())) < Real("1e-30"));
    CHECK(rel(d.l_n, sqrt(Real(2 * n)) / (2 * const_e())) < Real("1e-30"));
  }
}

TEST_CASE("shrinking the integration range costs a bounded factor") {
  PrecisionScope scope(256);
  for (const char* spec : {"power:2", "rationallog", "powerlog:0.5"}) {
    CAPTURE(spec);
    const Weight w = Weight::parse(spec);
    std::vector<Real> ratios;
    for (int n = 8; n <= 256; n *= 2) {
      const Real small = hall_partial(w, w.a_n(Real(2 * n)) / (2 * const_e()));
      const Real full = hall_partial(w, w.a_n(Real(n)));
      ratios.push_back(small / full);
    }
    // The constant fitted at the smallest n holds for the rest of the sweep.
    CHECK(ratios.front() > 0);
    CHECK(*std::min_element(ratios.begin(), ratios.end()) == ratios.front());
  }
}

TEST_CASE("scaled Chebyshev bound values") {
  PrecisionScope scope(256);
  {
    const Weight w = Weight::power("2");
    const ChebBoundData c = cheb_bound(w, 16);
    CHECK(rel(c.A_n, Real(4)) < Real("1e-60"));
    CHECK(c.log_numerator == 0);
    // |T_16(i/4)| = (r^16 + r^-16) / 2 with r = 1/4 + sqrt(1 + 1/16).
    const Real r = Real("0.25") + sqrt(Real("1.0625"));
    const Real denom = (pow(r, 16) + pow(r, -16)) / 2;
    CHECK(rel(c.bound_log, -log(denom)) < Real("1e-60"));
    CHECK(c.bound_log <= -16 * log(Real("1.25")) + const_ln2());
  }
  {
    const Weight w = Weight::exp_power("1");
    const ChebBoundData c = cheb_bound(w, 8);
    CHECK(rel(c.A_n, log(Real(8))) < Real("1e-60"));
    CHECK(c.bound_log <= -8 * log1p(1 / c.A_n) + const_ln2() + c.log_numerator);
    CHECK(rel(c.reference_log, -8 * log1p(1 / log(Real(8)))) < Real("1e-60"));
  }
}

TEST_CASE("scaled Chebyshev bound needs rapid growth") {
  PrecisionScope scope(256);
  try {
    cheb_bound(Weight::rational_log(), 8);
    FAIL("expected a class error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::Class);
  }
}

TEST_CASE("scaled Chebyshev bound dominates the extremal value") {
  for (const char* spec : {"power:2", "exppower:1"}) {
    const Weight w = Weight::parse(spec);
    RecurrenceCache cache;
    SolverOptions opt;
    opt.cache = &cache;
    for (int n : {8, 12, 16}) {
      CAPTURE(spec);
      CAPTURE(n);
      const ChebBoundData c = cheb_bound(w, n);
      const ErrorRecord e = en_uniform(w, n, opt);
      PrecisionScope scope(256);
      CHECK(e.log_value <= c.bound_log);
      CHECK(e.value > 0);
    }
  }
}

TEST_CASE("scaled Chebyshev bound tracks -n/A_n") {
  PrecisionScope scope(256);
  for (const char* spec : {"power:2", "exppower:1"}) {
    CAPTURE(spec);
    const Weight w = Weight::parse(spec);
    std::vector<Real> ratios;
    for (int n = 8; n <= 128; n *= 2) {
      const ChebBoundData c = cheb_bound(w, n);
      ratios.push_back(c.bound_log / (-n / c.A_n));
    }
    const Real lo = *std::min_element(ratios.begin(), ratios.end());
    const Real hi = *std::max_element(ratios.begin(), ratios.end());
    CHECK(lo > 0);
    CHECK(hi / lo <= 3);
  }
}

TEST_CASE("both constructions for a weight in both classes") {
  const Weight w = Weight::power("2");
  const UpperBounds u = upper_bounds(w, 12);
  REQUIRE(u.mergelyan.has_value());
  REQUIRE(u.chebyshev.has_value());
  PrecisionScope scope(256);
  CHECK(u.best_log == std::min(u.mergelyan->bound_log, u.chebyshev->bound_log));

  const UpperBounds r = upper_bounds(Weight::rational_log(), 8);
  CHECK(r.mergelyan.has_value());
  CHECK_FALSE(r.chebyshev.has_value());
  const UpperBounds x = upper_bounds(Weight::exp_power("1"), 8);
  CHECK_FALSE(x.mergelyan.has_value());
  CHECK(x.chebyshev.has_value());
}
