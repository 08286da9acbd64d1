#include "bernstein/constructions.hpp"

#include <algorithm>
#include <string>

#include "bernstein/chebyshev.hpp"

namespace bernstein {

namespace {

constexpr double kBracketCap = 4096;  // |log x| limit for the M_k search

void require_normal(const Weight& w, const GrowthClass& cls, const char* who) {
  if (!cls.normal()) {
    fail(ErrorCode::Class, std::string(who) + ": weight " + w.id() + " is " +
                               growth_kind_name(cls.kind) + ", not normally growing");
  }
}

Real log_sum_exp(const std::vector<Real>& terms) {
  Real top = terms.front();
  for (const Real& t : terms) top = std::max(top, t);
  Real s = 0;
  for (const Real& t : terms) s += exp(t - top);
  return top + log(s);
}

// Even polynomial sum_k b_k x^{2k} for real x.
Real even_eval(const std::vector<Real>& b, const Real& x) {
  const Real x2 = x * x;
  Real s = 0;
  for (size_t k = b.size(); k-- > 0;) s = s * x2 + b[k];
  return s;
}

}  // namespace

Real compute_log_mk(const Weight& w, const GrowthClass& cls, int k) {
  require_normal(w, cls, "compute_mk");
  if (k < 0) fail(ErrorCode::Domain, "compute_mk: k must be non-negative");

  // Concave in t for normally growing weights.
  auto g = [&](const Real& t) { return 2 * k * t - w.phi(exp(t)); };

  const Real g0 = g(Real(0));
  const Real gp = g(Real(1));
  const Real gm = g(Real(-1));
  Real lo = -1, hi = 1;
  if (gp > g0 || gm > g0) {
    const int dir = gp > g0 ? 1 : -1;
    Real prev = 0;
    Real cur = dir;
    Real gcur = dir > 0 ? gp : gm;
    Real step = 1;
    for (;;) {
      step *= 2;
      Real next = cur + dir * step;
      if (abs(next) > kBracketCap) {
        // Increasing all the way to x -> 0+: the supremum is the boundary limit.
        if (dir < 0 && k == 0) return std::max(gcur, -w.phi0());
        fail(ErrorCode::BracketFailure, "compute_mk: no interior maximum for k = " +
                                            std::to_string(k) + " on " + w.id());
      }
      Real gnext = g(next);
      if (gnext <= gcur) {
        lo = std::min(prev, next);
        hi = std::max(prev, next);
        break;
      }
      prev = cur;
      cur = next;
      gcur = gnext;
    }
  }
  Maximum m = golden_maximize(g, lo, hi, epsilon_power(1.0 / 3));
  return m.value;
}

Real compute_mk(const Weight& w, const GrowthClass& cls, int k) {
  return exp(compute_log_mk(w, cls, k));
}

Real compute_mk(const Weight& w, int k) { return compute_mk(w, classify_growth(w), k); }

Real log_majorant(const std::vector<Real>& log_m, const Real& x) {
  if (log_m.empty()) fail(ErrorCode::Domain, "log_majorant: no terms");
  if (x == 0) return -log_m.front();
  const Real lx = log(abs(x));
  std::vector<Real> terms(log_m.size());
  for (size_t k = 0; k < log_m.size(); ++k) {
    terms[k] = 2 * Real(k) * lx - Real(k) * const_ln2() - log_m[k];
  }
  return log_sum_exp(terms);
}

VidenskiiResult videnskii_check(const Weight& w, int k_terms, const std::vector<Real>& xs,
                                const Real& tail_tol) {
  const GrowthClass cls = classify_growth(w);
  require_normal(w, cls, "videnskii_check");
  if (k_terms < 1) fail(ErrorCode::Domain, "videnskii_check: need at least one term");
  if (xs.empty()) fail(ErrorCode::Domain, "videnskii_check: empty grid");

  std::vector<Real> log_m(k_terms);
  for (int k = 0; k < k_terms; ++k) log_m[k] = compute_log_mk(w, cls, k);

  // Each term is at most T(x) / 2^k <= W(x) / 2^k.
  const Real log_tail_factor = Real(1 - k_terms) * const_ln2();
  const Real log_tol = log(tail_tol);

  VidenskiiResult r;
  r.c_low = 0;
  r.c_high = 0;
  Real worst_tail = -infinity();
  for (const Real& x : xs) {
    if (x < 1) fail(ErrorCode::Domain, "videnskii_check: samples must be >= 1");
    const Real lf = log_majorant(log_m, x);
    const Real lf2 = log_majorant(log_m, 2 * x);
    const Real phi = w.phi(x);
    const Real tail1 = phi + log_tail_factor - lf;
    const Real tail2 = w.phi(2 * x) + log_tail_factor - lf2;
    worst_tail = std::max(worst_tail, std::max(tail1, tail2));
    if (tail1 > log_tol || tail2 > log_tol) {
      fail(ErrorCode::Tail, "videnskii_check: " + std::to_string(k_terms) +
                                " terms leave a relative tail of " +
                                to_decimal(exp(std::max(tail1, tail2)), 4) + " at x = " +
                                to_decimal(x, 8));
    }
    r.c_high = std::max(r.c_high, exp(lf - phi));
    r.c_low = std::max(r.c_low, exp(phi - 2 * log(x) - lf2));
  }
  r.tail_bound = exp(worst_tail);
  r.pass = is_finite(r.c_low) && is_finite(r.c_high);
  return r;
}

MergelyanData mergelyan_build(const Weight& w, const GrowthClass& cls, int n,
                              const ConstructionOptions& opt) {
  require_normal(w, cls, "mergelyan_build");
  if (n < 1) fail(ErrorCode::Domain, "mergelyan_build: n must be positive");
  if (Real(n) < w.phi0()) fail(ErrorCode::Domain, "mergelyan_build: n is below phi(0)");

  const unsigned bits =
      opt.precision_bits ? opt.precision_bits : default_precision_bits(2 * n);
  PrecisionScope scope(bits);

  MergelyanData d;
  d.n = n;
  d.precision_bits = bits;
  d.A_2n = w.a_n(Real(2 * n));
  d.l_n = d.A_2n / (2 * const_e());

  // On |x| <= A_2n / e the k-th term is at most e^{2n-2k} / 2^k, which
  // bounds the truncation of F there.
  const double ln2 = 0.6931471805599453;
  const int k_total = std::max(
      n + 1, static_cast<int>((2.0 * n + ln2 + 0.5 * bits * ln2) / (2.0 + ln2)) + 2);

  std::vector<Real> log_m(k_total + 1);
  std::vector<Real> b_all(k_total + 1);
  for (int k = 0; k <= k_total; ++k) {
    log_m[k] = compute_log_mk(w, cls, k);
    b_all[k] = exp(-log_m[k] - Real(k) * const_ln2());
  }
  d.M.resize(n + 1);
  d.b.assign(b_all.begin(), b_all.begin() + n + 1);
  for (int k = 0; k <= n; ++k) d.M[k] = exp(log_m[k]);

  std::vector<Real> coeffs(2 * n + 1, Real(0));
  for (int k = 0; k <= n; ++k) coeffs[2 * k] = d.b[k];
  d.P2n = PolyC::from_real(coeffs);

  const int pts = std::max(opt.check_points, 2);
  const Real edge = d.A_2n / const_e();
  d.hp_min_ratio = infinity();
  d.hp_max_gap = 0;
  for (int j = 0; j < pts; ++j) {
    const Real x = -edge + 2 * edge * j / (pts - 1);
    const Real p = even_eval(d.b, x);
    const Real f = even_eval(b_all, x);
    d.hp_min_ratio = std::min(d.hp_min_ratio, p / f);
    d.hp_max_gap = std::max(d.hp_max_gap, f - p);
  }
  if (d.hp_min_ratio < Real("0.5") * (1 - epsilon_power(0.25))) {
    fail(ErrorCode::PrecisionLoss, "mergelyan_build: P_2n / F dropped to " +
                                       to_decimal(d.hp_min_ratio, 8) + " on |x| <= A_2n/e");
  }

  RootOptions ropt;
  const Real root_tol = epsilon_power(0.5);
  ropt.root_tol = root_tol;
  const std::vector<Complex> zs = find_roots(d.P2n, ropt);
  std::vector<Complex> lower, upper;
  for (const Complex& z : zs) {
    if (abs(z.im) <= root_tol * (1 + abs(z))) {
      fail(ErrorCode::Factorization, "mergelyan_build: root " + to_decimal(z.re, 8) + " + " +
                                         to_decimal(z.im, 8) + "i is on the real axis");
    }
    (z.im < 0 ? lower : upper).push_back(z);
  }
  if (static_cast<int>(lower.size()) != n || upper.size() != lower.size()) {
    fail(ErrorCode::Factorization, "mergelyan_build: roots are not in conjugate pairs");
  }
  // Nearest unused conjugate; zeros may sit on the imaginary axis, so an
  // ordering by real part alone is ambiguous.
  const Real pair_tol = epsilon_power(0.25);
  std::vector<bool> used(n, false);
  for (int j = 0; j < n; ++j) {
    int pick = -1;
    Real gap = infinity();
    for (int m = 0; m < n; ++m) {
      if (used[m]) continue;
      const Real dist = abs(lower[j] - conj(upper[m]));
      if (dist < gap) {
        gap = dist;
        pick = m;
      }
    }
    if (gap > pair_tol * (1 + abs(lower[j]))) {
      fail(ErrorCode::Factorization, "mergelyan_build: unmatched conjugate pair");
    }
    used[pick] = true;
    lower[j] = (lower[j] + conj(upper[pick])) / Real(2);
  }
  d.roots = lower;

  const Real lead = sqrt(d.b[n]);
  PolyC q({Complex(lead)});
  for (const Complex& z : d.roots) q = q * PolyC({-z, Complex(Real(1))});
  d.Qn = q;

  d.factor_residual = 0;
  const Real span = 2 * d.A_2n;
  for (int j = 0; j < pts; ++j) {
    const Real x = -span + 2 * span * j / (pts - 1);
    const Real p = even_eval(d.b, x);
    d.factor_residual = std::max(d.factor_residual, abs(norm(d.Qn(x)) - p) / p);
  }
  if (d.factor_residual > Real(opt.residual_tol)) {
    fail(ErrorCode::Factorization, "mergelyan_build: |Q_n|^2 - P_2n residual " +
                                       to_decimal(d.factor_residual, 4));
  }

  const Complex i = imag_unit();
  d.log_at_i = log(lead);
  for (const Complex& z : d.roots) d.log_at_i += log(abs(i - z));

  // |Q_n|^2 = P_2n on the real line, so the weighted sup needs only P_2n.
  auto h = [&](const Real& x) {
    return log(even_eval(d.b, x)) / 2 - w.phi(x) - log1p(x * x) / 2;
  };
  Real sum_b = 0;
  for (const Real& bk : d.b) sum_b += bk;
  const Real h0 = h(Real(0));
  // phi(e^t) - n t is convex, so once it grows past the margin it stays there.
  auto envelope = [&](const Real& x) { return w.phi(x) - n * log(x) - log(sum_b) / 2; };
  Real X = 4;
  while (!(envelope(X) > 40 - h0 && envelope(2 * X) > envelope(X))) {
    X *= 2;
    if (X > Real(1e300)) fail(ErrorCode::Tail, "mergelyan_build: weighted sup has no cutoff");
  }
  const int grid = 4000;
  const Real umax = asinh(X);
  Real best = h0;
  int best_j = 0;
  std::vector<Real> xs(grid + 1);
  for (int j = 0; j <= grid; ++j) {
    xs[j] = sinh(umax * j / grid);
    const Real v = h(xs[j]);
    if (v > best) {
      best = v;
      best_j = j;
    }
  }
  const Real lo = xs[std::max(best_j - 1, 0)];
  const Real hi = xs[std::min(best_j + 1, grid)];
  if (hi > lo) {
    Maximum m = golden_maximize(h, lo, hi, epsilon_power(1.0 / 3) * (1 + hi));
    best = std::max(best, m.value);
  }
  d.log_sup = best;
  d.bound_log = d.log_sup - d.log_at_i;
  return d;
}

MergelyanData mergelyan_build(const Weight& w, int n, const ConstructionOptions& opt) {
  return mergelyan_build(w, classify_growth(w), n, opt);
}

MergelyanRate mergelyan_rate_check(const MergelyanData& data, const Weight& w) {
  PrecisionScope scope(data.precision_bits ? data.precision_bits : 256);
  return {-data.bound_log, hall_partial(w, data.l_n)};
}

ChebBoundData cheb_bound(const Weight& w, const GrowthClass& cls, int n,
                         const ConstructionOptions& opt) {
  if (!cls.rapid()) {
    fail(ErrorCode::Class, std::string("cheb_bound: weight ") + w.id() + " is " +
                               growth_kind_name(cls.kind) + ", not rapidly growing");
  }
  if (n < 1) fail(ErrorCode::Domain, "cheb_bound: n must be positive");
  PrecisionScope scope(opt.precision_bits ? opt.precision_bits : 256);

  ChebBoundData d;
  d.n = n;
  d.A_n = w.a_n(Real(n));
  // On [0, A_n] the ratio is at most 1; beyond A_n it is the tail supremum.
  const Lemma2Result tail = lemma2_sup(w, cls, n);
  d.log_numerator = std::max(Real(0), tail.log_value);
  d.log_denominator = t_log_abs(n, Complex(Real(0), 1 / d.A_n));
  d.bound_log = d.log_numerator - d.log_denominator;
  d.reference_log = -n * log1p(1 / d.A_n) + std::max(Real(0), n * log(2 / const_e()));

  // |T_n(i/a)| >= (1 + 1/a)^n / 2 caps the bound at reference + log 2 + numerator.
  const Real cap = -n * log1p(1 / d.A_n) + const_ln2() + d.log_numerator;
  if (d.bound_log > cap + epsilon_power(0.5) * (1 + abs(cap))) {
    fail(ErrorCode::PrecisionLoss, "cheb_bound: bound exceeds the Chebyshev growth estimate");
  }
  return d;
}

ChebBoundData cheb_bound(const Weight& w, int n, const ConstructionOptions& opt) {
  return cheb_bound(w, classify_growth(w), n, opt);
}

UpperBounds upper_bounds(const Weight& w, int n, const ConstructionOptions& opt) {
  UpperBounds u;
  u.cls = classify_growth(w);
  if (!u.cls.normal() && !u.cls.rapid()) {
    fail(ErrorCode::Class, "upper_bounds: weight " + w.id() + " has no growth class");
  }
  if (u.cls.normal()) u.mergelyan = mergelyan_build(w, u.cls, n, opt);
  if (u.cls.rapid()) u.chebyshev = cheb_bound(w, u.cls, n, opt);
  if (u.mergelyan && u.chebyshev) {
    u.best_log = std::min(u.mergelyan->bound_log, u.chebyshev->bound_log);
  } else {
    u.best_log = u.mergelyan ? u.mergelyan->bound_log : u.chebyshev->bound_log;
  }
  return u;
}

}  // namespace bernstein
