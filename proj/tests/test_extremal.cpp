#include <Eigen/Dense>
#include <cmath>
#include <complex>
#include <filesystem>
#include <fstream>
#include <random>
#include <thread>

#include "bernstein/extremal.hpp"
#include "doctest.h"
#include "oracles.hpp"

using namespace bernstein;
using namespace bernstein::oracle;

namespace {

std::vector<Weight> builtins() {
  return {Weight::rational_log(), Weight::power_log("0.5"), Weight::power("2"),
          Weight::power("1.5"), Weight::exp_power("1")};
}

QuadratureSpec panels() { return QuadratureSpec::standard(QuadratureSpec::Scheme::GaussPanels); }

Real rel(const Real& a, const Real& b) { return abs(a - b) / abs(b); }

Real mu_density(const Weight& w, const Real& x) {
  return exp(-2 * w.phi(abs(x))) / (x * x + 1);
}

Real moment(const Weight& w, int k) {
  auto spec = QuadratureSpec::standard(QuadratureSpec::Scheme::TanhSinh);
  Real half = integrate([&](const Real& x) { return pow(x, k) * mu_density(w, x); }, Real(0),
                        Real(std::numeric_limits<double>::infinity()), spec);
  return k % 2 ? Real(0) : 2 * half;
}

double sup_weighted(const PolyC& P, const Weight& w, double X, int points) {
  double best = 0;
  for (int j = 0; j < points; ++j) {
    const Real x = Real(X * j / (points - 1));
    const Complex v = P(x);
    const Real mod = sqrt(v.re * v.re + v.im * v.im) * exp(-w.phi(x)) / sqrt(x * x + 1);
    best = std::max(best, mod.convert_to<double>());
  }
  return best;
}

}  // namespace

// ---------------------------------------------------------------------------

TEST_CASE("measure grid moments") {
  PrecisionScope scope(256);
  for (const Weight& w : {Weight::power("2"), Weight::rational_log(), Weight::exp_power("1")}) {
    CAPTURE(w.id());
    MeasureGrid g = build_measure_grid(w, 8, panels());
    REQUIRE(g.nodes.size() == g.weights.size());
    for (size_t j = 0; j < g.nodes.size(); ++j) {
      CHECK(g.nodes[j] == -g.nodes[g.nodes.size() - 1 - j]);
      CHECK(g.weights[j] == g.weights[g.nodes.size() - 1 - j]);
    }
    for (int k = 0; k <= 16; ++k) {
      CAPTURE(k);
      Real m = 0;
      for (size_t j = 0; j < g.nodes.size(); ++j) m += g.weights[j] * pow(g.nodes[j], k);
      const Real exact = moment(w, k);
      if (k % 2) {
        CHECK(abs(m) < Real(1e-20) * moment(w, k - 1));
      } else {
        CHECK(rel(m, exact) < Real(1e-20));
      }
    }
  }
}

TEST_CASE("measure cutoff bounds the truncated tail") {
  PrecisionScope scope(256);
  const Weight w = Weight::power("2");
  const Real thr = epsilon_power(0.5);
  const Real X = measure_cutoff(w, Density::mu(), 8, thr);
  CHECK(X > 1);
  CHECK(mu_density(w, X) * pow(X, 16) <= thr);
}

TEST_CASE("stieltjes recurrence against a discrete measure") {
  PrecisionScope scope(128);
  // Uniform masses on -1, 0, 1: p_1 = x / sqrt(2/3), a_k = 0.
  std::vector<Real> nodes{Real(-1), Real(0), Real(1)};
  std::vector<Real> weights(3, Real(1) / 3);
  Recurrence r = stieltjes(nodes, weights, 1);
  CHECK(r.mass() == 1);
  CHECK(abs(r.a[0]) < Real(1e-35));
  CHECK(rel(r.b[1], Real(2) / 3) < Real(1e-35));
  auto p = orthonormal_values(r, 1, Real(1));
  CHECK(rel(p[1], sqrt(Real(3) / 2)) < Real(1e-35));
}

TEST_CASE("recurrence cache round trip") {
  PrecisionScope scope(256);
  const auto dir = std::filesystem::temp_directory_path() / "bernstein-test-cache";
  std::filesystem::remove_all(dir);
  const Weight w = Weight::power("2");
  Recurrence r = stieltjes(build_measure_grid(w, 6, panels()), 6);
  RecurrenceCache::Key key{w.id(), "mu", 256, "8", 6};
  {
    RecurrenceCache cache(dir);
    CHECK_FALSE(cache.load(key).has_value());
    cache.store(key, r);
    CHECK(std::filesystem::exists(cache.file_for(key)));
  }
  RecurrenceCache fresh(dir);
  auto hit = fresh.load(key);
  REQUIRE(hit.has_value());
  REQUIRE(hit->a.size() == r.a.size());
  for (size_t k = 0; k < r.a.size(); ++k) {
    CHECK(hit->a[k] == r.a[k]);
    CHECK(hit->b[k] == r.b[k]);
  }
  CHECK(fresh.hits() == 1);

  RecurrenceCache::Key other = key;
  other.n_max = 7;
  CHECK_FALSE(fresh.load(other).has_value());

  // A file whose recorded key disagrees is rejected.
  std::filesystem::copy_file(fresh.file_for(key), fresh.file_for(other));
  RecurrenceCache third(dir);
  CHECK_FALSE(third.load(other).has_value());

  std::ofstream(dir / "unrelated.json") << "{}";
  CHECK(third.stats().files == 2);
  CHECK(third.clear() == 2);
  CHECK(std::filesystem::exists(dir / "unrelated.json"));
  std::filesystem::remove_all(dir);
}

TEST_CASE("recurrence cache under concurrent use") {
  const auto dir = std::filesystem::temp_directory_path() / "bernstein-test-cache-mt";
  std::filesystem::remove_all(dir);
  RecurrenceCache cache(dir);
  const Weight w = Weight::power("2");
  std::vector<Real> first(4);
  std::vector<std::thread> threads;
  for (int t = 0; t < 4; ++t) {
    threads.emplace_back([&, t] {
      PrecisionScope scope(256);
      first[t] = measure_recurrence(w, Density::mu(), 8, &cache).b[3];
    });
  }
  for (auto& th : threads) th.join();
  for (int t = 1; t < 4; ++t) CHECK(first[t] == first[0]);
  CHECK(cache.stats().files == 1);
  std::filesystem::remove_all(dir);
}

// ---------------------------------------------------------------------------
// p = 2

TEST_CASE("E_0 at p = 2 is the root of the total mass") {
  PrecisionScope scope(256);
  for (const Weight& w : builtins()) {
    CAPTURE(w.id());
    MeasureGrid g = build_measure_grid(w, 4, panels());
    ErrorRecord rec = en_l2(w, 0, g);
    CHECK(rel(rec.value, sqrt(moment(w, 0))) < Real(1e-30));
  }
}

TEST_CASE("Gram oracle closed form at n = 1") {
  PrecisionScope scope(256);
  const Weight w = Weight::power("2");
  MeasureGrid g = build_measure_grid(w, 2, panels());
  const Real m0 = moment(w, 0), m2 = moment(w, 2);
  // min c*Gc subject to c_0 + i c_1 = 1 with G = diag(m0, m2).
  const Real expect = sqrt(m0 * m2 / (m0 + m2));
  CHECK(rel(en_l2_gram_oracle(w, 1, g), expect) < Real(1e-30));
  CHECK(rel(en_l2_gram_oracle(w, 0, g), sqrt(m0)) < Real(1e-30));
}

TEST_CASE("en_l2 matches the Gram oracle") {
  PrecisionScope scope(512);
  for (const Weight& w : {Weight::power("2"), Weight::rational_log(), Weight::exp_power("1")}) {
    MeasureGrid g = build_measure_grid(w, 16, panels());
    for (int n = 0; n <= 16; ++n) {
      CAPTURE(w.id());
      CAPTURE(n);
      ErrorRecord rec = en_l2(w, n, g);
      CHECK(rel(rec.value, en_l2_gram_oracle(w, n, g)) < Real(1e-10));
      CHECK(rec.constraint_residual <= Real(1e-20));
    }
  }
}

TEST_CASE("p = 2 minimizer is conjugate symmetric and monotone in n") {
  for (const Weight& w : builtins()) {
    CAPTURE(w.id());
    RecurrenceCache cache;
    SolverOptions opt;
    opt.n_max = 32;
    opt.cache = &cache;
    Real prev = -1;
    for (int n = 0; n <= 32; ++n) {
      CAPTURE(n);
      ErrorRecord rec = en_l2(w, n, opt);
      CHECK(rec.constraint_residual <= Real(1e-20));
      if (prev > 0) CHECK(rec.value <= prev * (1 + Real(1e-10)));
      prev = rec.value;
      const auto& c = rec.extremal_poly.coeffs();
      Real scale = 0;
      for (const auto& ck : c) scale = std::max(scale, Real(abs(ck.re) + abs(ck.im)));
      for (size_t k = 0; k < c.size(); ++k) {
        CHECK(abs(k % 2 ? c[k].re : c[k].im) <= Real(1e-20) * scale);
      }
    }
  }
}

// ---------------------------------------------------------------------------
// p = inf

TEST_CASE("E_0 at p = inf is exp(-phi(0))") {
  for (const Weight& w : builtins()) {
    CAPTURE(w.id());
    ErrorRecord rec = en_uniform(w, 0);
    CHECK(rel(rec.value, exp(-w.phi0())) < Real(1e-12));
  }
}

TEST_CASE("en_uniform matches a dense-grid oracle") {
  for (const Weight& w : {Weight::power("2"), Weight::exp_power("1"), Weight::rational_log(),
                          Weight::power_log("0.5")}) {
    for (int n : {1, 2, 3, 5, 8}) {
      CAPTURE(w.id());
      CAPTURE(n);
      ErrorRecord rec = en_uniform(w, n);
      const double oracle = dense_uniform_oracle(w, n, 100000);
      CHECK(std::abs(rec.value.convert_to<double>() / oracle - 1) < 1e-6);
    }
  }
}

TEST_CASE("en_uniform certificate and monotonicity") {
  for (const Weight& w : {Weight::power("2"), Weight::rational_log()}) {
    CAPTURE(w.id());
    RecurrenceCache cache;
    SolverOptions opt;
    opt.n_max = 16;
    opt.cache = &cache;
    Real prev = -1;
    for (int n = 0; n <= 12; ++n) {
      CAPTURE(n);
      ErrorRecord rec = en_uniform(w, n, opt);
      const Certificate& cert = rec.certificate;
      CHECK(rec.constraint_residual <= Real(1e-20));
      if (n > 0) {
        CHECK(cert.kind == Certificate::Kind::MinimaxDual);
        CHECK(cert.lower_bound <= rec.value);
        CHECK(rec.value <= cert.upper_bound);
        CHECK(cert.relative_gap <= Real(opt.tol));
        CHECK(!cert.support.empty());
      }
      if (prev > 0) CHECK(rec.value <= prev * (1 + Real(1e-10)));
      prev = rec.value;
    }
  }
}

TEST_CASE("L2 extremal polynomial bounds E_n at p = inf from above") {
  const Weight w = Weight::power("2");
  for (int n : {2, 4, 8}) {
    CAPTURE(n);
    const ErrorRecord l2 = en_l2(w, n);
    const ErrorRecord uni = en_uniform(w, n);
    const double sup = sup_weighted(l2.extremal_poly, w, 8, 20000);
    CHECK(sup >= uni.value.convert_to<double>() * (1 - 1e-9));
  }
}

// ---------------------------------------------------------------------------
// general p

TEST_CASE("en_lp at p = 2 agrees with en_l2") {
  for (const Weight& w : {Weight::power("2"), Weight::power_log("0.5")}) {
    for (int n : {0, 3, 10}) {
      CAPTURE(w.id());
      CAPTURE(n);
      SolverOptions opt;
      const Real a = en_lp(w, n, 2, opt).value;
      const Real b = en_l2(w, n, opt).value;
      CHECK(rel(a, b) <= Real(opt.tol));
    }
  }
}

TEST_CASE("en_lp at p = 1, n = 0 is the mass of the p = 1 density") {
  for (const Weight& w : {Weight::power("2"), Weight::rational_log()}) {
    CAPTURE(w.id());
    auto spec = QuadratureSpec::standard(QuadratureSpec::Scheme::TanhSinh);
    const Real mass =
        2 * integrate([&](const Real& x) { return exp(-w.phi(x)) / sqrt(x * x + 1); }, Real(0),
                      Real(std::numeric_limits<double>::infinity()), spec);
    CHECK(rel(en_lp(w, 0, 1).value, mass) < Real(1e-12));
  }
}

TEST_CASE("en_lp at p = 4 matches a Newton descent oracle") {
  for (const Weight& w : {Weight::power("2"), Weight::rational_log(), Weight::exp_power("1")}) {
    for (int n : {1, 4, 8}) {
      CAPTURE(w.id());
      CAPTURE(n);
      const ErrorRecord rec = en_lp(w, n, 4);
      const double oracle = descent_l4_oracle(w, n, 20000);
      CHECK(std::abs(rec.value.convert_to<double>() / oracle - 1) < 1e-6);
      CHECK(rec.constraint_residual <= Real(1e-20));
    }
  }
}

TEST_CASE("E_n is nonincreasing for p in {1, 3}") {
  const Weight w = Weight::power_log("0.5");
  for (double p : {1.0, 3.0}) {
    Real prev = -1;
    for (int n = 0; n <= 10; ++n) {
      CAPTURE(p);
      CAPTURE(n);
      const Real v = en_lp(w, n, p).value;
      if (prev > 0) CHECK(v <= prev * (1 + Real(1e-10)));
      prev = v;
    }
  }
}

// ---------------------------------------------------------------------------
// Cauchy kernel form

TEST_CASE("Cauchy best approximation equals the constrained problem") {
  for (const Weight& w : {Weight::power("2"), Weight::rational_log(), Weight::power_log("0.5")}) {
    for (double p : {2.0, kInfinityP}) {
      Real prev = -1;
      for (int n = 1; n <= 12; ++n) {
        CAPTURE(w.id());
        CAPTURE(p);
        CAPTURE(n);
        const CauchyApprox ca = cauchy_best_approx(w, n, p);
        const ErrorRecord rec = compute_en(w, n, p);
        CHECK(rel(ca.err, rec.value) < Real(1e-8));
        CHECK(ca.q.degree() <= n - 1);
        // P = 1 - (x - i) Q satisfies the constraint and has the same norm.
        CHECK(abs(ca.p_poly(imag_unit()) - Complex(Real(1))) < Real(1e-20));
        const Real x = Real(3) / 7;
        const Complex lhs = ca.p_poly(x);
        const Complex rhs = Complex(Real(1)) - Complex(x, Real(-1)) * ca.q(x);
        CHECK(abs(lhs - rhs) < Real(1e-20));
        if (prev > 0) CHECK(ca.err <= prev * (1 + Real(1e-10)));
        prev = ca.err;
      }
    }
  }
}

TEST_CASE("Cauchy form at n = 0 is the kernel norm") {
  const Weight w = Weight::power("2");
  CHECK(rel(cauchy_best_approx(w, 0, 2).err, en_l2(w, 0).value) < Real(1e-20));
  CHECK(rel(cauchy_best_approx(w, 0, kInfinityP).err, exp(-w.phi0())) < Real(1e-12));
}

// ---------------------------------------------------------------------------
// Markov-type inequality

TEST_CASE("markov check hand examples") {
  PrecisionScope scope(256);
  // q = x on [-2, 2], p = 1: max 2, bound 8 * (1/2) * 4 = 16.
  MarkovCheck m = markov_lemma_check(PolyC::from_real({Real(0), Real(1)}), Real(2), 1);
  CHECK(abs(m.max_p - 2) < Real(1e-30));
  CHECK(abs(m.bound - 16) < Real(1e-30));
  CHECK(m.pass);
  // Constant 3 read as degree one: 3^p <= 2^{p+2} (1/a) 2a 3^p.
  for (double p : {1.0, 2.0, 3.0}) {
    m = markov_lemma_check(PolyC::from_real({Real(3)}), Real(4), p, 1);
    CHECK(abs(m.max_p - pow(Real(3), p)) < Real(1e-30));
    CHECK(abs(m.bound - pow(Real(2), p + 3) * pow(Real(3), p)) < Real(1e-25));
    CHECK(m.pass);
  }
}

TEST_CASE("markov check random sweep") {
  PrecisionScope scope(256);
  std::mt19937_64 rng(20240611);
  std::uniform_real_distribution<double> coef(-1, 1);
  std::uniform_int_distribution<int> deg(1, 8);
  const double as[] = {2, 4, 8};
  const double ps[] = {1, 2, 3};
  int failures = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    std::vector<Real> c(deg(rng) + 1);
    for (auto& ck : c) ck = coef(rng);
    const MarkovCheck m = markov_lemma_check(PolyC::from_real(c), Real(as[trial % 3]),
                                             ps[(trial / 3) % 3]);
    failures += !m.pass;
  }
  CHECK(failures == 0);
}

// ---------------------------------------------------------------------------

TEST_CASE("sandwich report for x^2 at p = 2") {
  RateReport rep = sandwich_report(Weight::power("2"), 2, {8, 16, 32, 64});
  REQUIRE(rep.rows.size() == 4);
  CHECK(rep.ratio_spread <= 3);
  REQUIRE(rep.ratio_slope.has_value());
  CHECK(abs(*rep.ratio_slope) <= Real(0.2));
  REQUIRE(rep.en_slope.has_value());
  CHECK(abs(*rep.en_slope - Real(0.5)) <= Real(0.1));
  for (const RateRow& row : rep.rows) CHECK(rel(row.ratio, row.neg_log_en / row.R) < Real(1e-30));
}

TEST_CASE("sandwich report rejects n below phi(1)") {
  CHECK_THROWS_AS(sandwich_report(Weight::exp_power("1"), 2, {2, 8}), Error);
}
