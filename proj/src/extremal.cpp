#include "bernstein/extremal.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <boost/multiprecision/eigen.hpp>
#include <cmath>

#include "extremal_detail.hpp"
#include "minimax.hpp"

namespace bernstein {

using detail::cld;
using detail::ld;

namespace detail {

LdRecurrence::LdRecurrence(const Recurrence& r, int degree) : n(degree) {
  if (degree > r.degree()) fail(ErrorCode::Domain, "recurrence evaluated beyond its degree");
  p0 = to_ld(1 / sqrt(r.b[0]));
  for (int k = 0; k < degree; ++k) {
    a.push_back(to_ld(r.a[k]));
    sb.push_back(to_ld(sqrt(r.b[k + 1])));
  }
}

void LdRecurrence::eval(ld x, ld* out) const {
  out[0] = p0;
  for (int k = 0; k < n; ++k) {
    ld t = (x - a[k]) * out[k];
    if (k > 0) t -= sb[k - 1] * out[k - 1];
    out[k + 1] = t / sb[k];
  }
}

PolyC combine_monomial(const std::vector<std::vector<Real>>& mono, const std::vector<Complex>& c) {
  std::vector<Complex> coeffs(mono.size());
  for (size_t k = 0; k < c.size(); ++k) {
    for (size_t j = 0; j < mono[k].size(); ++j) coeffs[j] += c[k] * mono[k][j];
  }
  return PolyC(std::move(coeffs));
}

}  // namespace detail

namespace {

int next_pow2(int n) {
  int t = 1;
  while (t < n) t *= 2;
  return t;
}

QuadratureSpec grid_spec() { return QuadratureSpec::standard(QuadratureSpec::Scheme::GaussPanels); }

void fill_record_value(ErrorRecord& rec, const Real& log_value) {
  rec.log_value = log_value;
  rec.value = exp(log_value);
  if (!(rec.value > 0)) fail(ErrorCode::PrecisionLoss, "E_n underflows the working range");
}

void fill_poly(ErrorRecord& rec, PolyC poly) {
  rec.constraint_residual = abs(poly(imag_unit()) - Complex(Real(1)));
  rec.imaginary_mass = poly.imaginary_mass();
  rec.extremal_poly = std::move(poly);
}

// sum_k c_k p_k at x, with p_k from a Real recurrence.
Complex series_at(const Recurrence& r, const std::vector<Complex>& c, const Real& x) {
  const auto p = orthonormal_values(r, static_cast<int>(c.size()) - 1, x);
  Complex s;
  for (size_t k = 0; k < c.size(); ++k) s += c[k] * p[k];
  return s;
}

Complex series_at(const Recurrence& r, const std::vector<Complex>& c, const Complex& z) {
  const auto p = orthonormal_values(r, static_cast<int>(c.size()) - 1, z);
  Complex s;
  for (size_t k = 0; k < c.size(); ++k) s += c[k] * p[k];
  return s;
}

ld chebyshev_point(int j, int count, ld half_width) {
  return half_width * std::cos(3.141592653589793238462643383279502884L * (j + 0.5L) / count);
}

// Pricing grid for the minimax solver: Chebyshev points over the bulk
// [-L, L] for the oscillations, plus a sinh-graded grid out to the cutoff
// that resolves the unit scale near the origin and the tails.
std::vector<ld> pricing_grid(ld L, ld X, int n) {
  std::vector<ld> g;
  const int bulk = 48 * (n + 1) + 64;
  for (int j = 0; j < bulk; ++j) g.push_back(chebyshev_point(j, bulk, L));
  const ld umax = std::asinh(X);
  const int graded = static_cast<int>(std::ceil(64 * umax));
  for (int j = -graded; j <= graded; ++j) g.push_back(std::sinh(umax * j / graded));
  g.push_back(X);
  g.push_back(-X);
  std::sort(g.begin(), g.end());
  g.erase(std::unique(g.begin(), g.end()), g.end());
  return g;
}

// Bulk half-width for the grid and seed points: twice A_{2n}, clipped to the cutoff.
ld bulk_width(const Weight& w, int n, ld X) {
  const Real target = Real(std::max(2 * n, 1));
  ld a = 1;
  if (target > w.phi0()) a = std::max<ld>(1, detail::to_ld(w.a_n(target)));
  return std::min(X, std::max<ld>(4, 2 * a));
}

struct SupResult {
  Real log_value;
  Real x;
};

// Largest of log f over candidate abscissae, each refined by golden section
// within the neighbouring grid cell.
SupResult refine_sup(const std::function<Real(const Real&)>& log_f, const std::vector<ld>& grid,
                     const std::vector<ld>& candidates) {
  SupResult best{Real(-infinity()), Real(0)};
  const Real x_tol = epsilon_power(0.25);
  for (ld c : candidates) {
    auto it = std::lower_bound(grid.begin(), grid.end(), c);
    const size_t j = static_cast<size_t>(it - grid.begin());
    const ld lo = grid[j == 0 ? 0 : j - 1];
    const ld hi = grid[std::min(j + 1, grid.size() - 1)];
    Real v = log_f(Real(c));
    Real x = c;
    if (hi > lo) {
      auto m = golden_maximize(log_f, Real(lo), Real(hi), x_tol * std::max<ld>(1, std::abs(c)));
      if (m.value > v) {
        v = m.value;
        x = m.x;
      }
    }
    if (v > best.log_value) best = {v, x};
  }
  return best;
}

void check_boundary(const Real& x, ld X, const std::string& what) {
  if (abs(x) >= Real(X) * (1 - Real(1e-6))) {
    fail(ErrorCode::GridTooCoarse, what + ": maximum sits at the truncation boundary " +
                                       to_decimal(Real(X), 8));
  }
}

}  // namespace

int degree_tier(int n) { return next_pow2(std::max(n, 16)); }

unsigned solver_precision(int n, const SolverOptions& opt) {
  if (opt.precision_bits) return opt.precision_bits;
  return default_precision_bits(opt.n_max > 0 ? opt.n_max : degree_tier(n));
}

namespace {

int tier_for(int n, const SolverOptions& opt) {
  if (n < 0) fail(ErrorCode::Domain, "degree must be non-negative");
  const int tier = opt.n_max > 0 ? opt.n_max : degree_tier(n);
  if (n > tier) fail(ErrorCode::Domain, "degree exceeds the grid tier n_max");
  return tier;
}

}  // namespace

Recurrence measure_recurrence(const Weight& w, const Density& d, int n_max,
                              RecurrenceCache* cache) {
  const QuadratureSpec spec = grid_spec();
  const Real X = measure_cutoff(w, d, n_max, spec.tail_cutoff_threshold);
  RecurrenceCache::Key key{w.id(), d.tag, working_precision_bits(), to_decimal(X), n_max};
  if (cache) {
    if (auto hit = cache->load(key)) return *hit;
  }
  Recurrence r = stieltjes(build_measure_grid(w, n_max, spec, d), n_max);
  if (cache) cache->store(key, r);
  return r;
}

// ---------------------------------------------------------------------------
// p = 2

namespace {

ErrorRecord christoffel(const Weight& w, int n, const Recurrence& r) {
  ErrorRecord rec;
  rec.n = n;
  rec.p = 2;
  rec.weight_id = w.id();
  rec.precision_bits = working_precision_bits();
  const auto pi = orthonormal_values(r, n, imag_unit());
  Real K = 0;
  for (const auto& v : pi) K += norm(v);
  fill_record_value(rec, -log(K) / 2);
  // P(x) = K_n(x, i) / K_n(i, i).
  std::vector<Complex> c(n + 1);
  for (int k = 0; k <= n; ++k) c[k] = conj(pi[k]) / K;
  fill_poly(rec, detail::combine_monomial(orthonormal_monomials(r, n), c));
  rec.certificate.kind = Certificate::Kind::ChristoffelKernel;
  rec.certificate.kernel_value = K;
  rec.certificate.iterations = 1;
  return rec;
}

}  // namespace

ErrorRecord en_l2(const Weight& w, int n, const SolverOptions& opt) {
  const int tier = tier_for(n, opt);
  PrecisionScope scope(solver_precision(n, opt));
  return christoffel(w, n, measure_recurrence(w, Density::mu(), tier, opt.cache));
}

ErrorRecord en_l2(const Weight& w, int n, const MeasureGrid& grid) {
  if (n < 0) fail(ErrorCode::Domain, "en_l2: degree must be non-negative");
  if (n > grid.n_max) fail(ErrorCode::Precondition, "en_l2: grid is not exact through degree 2n");
  return christoffel(w, n, stieltjes(grid, n));
}

Real en_l2_gram_oracle(const Weight& w, int n, const MeasureGrid& grid) {
  if (n < 0 || n > 16) fail(ErrorCode::Domain, "en_l2_gram_oracle: need 0 <= n <= 16");
  if (n > grid.n_max) fail(ErrorCode::Precondition, "en_l2_gram_oracle: grid too coarse");
  (void)w;
  using RMat = Eigen::Matrix<Real, Eigen::Dynamic, Eigen::Dynamic>;
  using RVec = Eigen::Matrix<Real, Eigen::Dynamic, 1>;
  const int m = n + 1;
  std::vector<Real> mom(2 * n + 1, Real(0));
  for (size_t j = 0; j < grid.nodes.size(); ++j) {
    Real acc = grid.weights[j];
    for (int k = 0; k <= 2 * n; ++k) {
      mom[k] += acc;
      acc *= grid.nodes[j];
    }
  }
  RMat G(m, m);
  for (int j = 0; j < m; ++j) {
    for (int k = 0; k < m; ++k) G(j, k) = mom[j + k];
  }
  // v_k = i^k; G is real, so solve G y = conj(v) by parts.
  RVec vr = RVec::Zero(m), vi = RVec::Zero(m);
  for (int k = 0; k < m; ++k) {
    switch (k % 4) {
      case 0: vr(k) = 1; break;
      case 1: vi(k) = -1; break;
      case 2: vr(k) = -1; break;
      case 3: vi(k) = 1; break;
    }
  }
  Eigen::LLT<RMat> llt(G);
  if (llt.info() != Eigen::Success) {
    fail(ErrorCode::SingularMatrix, "en_l2_gram_oracle: moment matrix is not positive definite");
  }
  const RVec yr = llt.solve(vr), yi = llt.solve(vi);
  // min c*Gc = 1 / (v^T G^{-1} conj(v)); with conj(v) = vr + i vi the
  // quadratic form is vr.yr + vi.yi.
  const Real q = vr.dot(yr) + vi.dot(yi);
  if (!(q > 0)) fail(ErrorCode::SingularMatrix, "en_l2_gram_oracle: non-positive quadratic form");
  return sqrt(1 / q);
}

// ---------------------------------------------------------------------------
// p = inf

namespace {

std::vector<ld> seed_points(int count, ld half_width) {
  std::vector<ld> s;
  for (int j = 0; j < count; ++j) s.push_back(chebyshev_point(j, count, half_width));
  s.push_back(0);
  return s;
}

std::vector<ld> top_candidates(const detail::MinimaxProblem& pr, const std::vector<cld>& c) {
  std::vector<ld> xs;
  for (const auto& [v, x] : detail::refined_maxima(pr, c)) {
    xs.push_back(x);
    if (xs.size() >= 12) break;
  }
  xs.push_back(0);
  return xs;
}

}  // namespace

ErrorRecord en_uniform(const Weight& w, int n, const SolverOptions& opt) {
  const int tier = tier_for(n, opt);
  PrecisionScope scope(solver_precision(n, opt));
  const Recurrence r = measure_recurrence(w, Density::mu(), tier, opt.cache);
  const ld X = detail::to_ld(measure_cutoff(w, Density::mu(), tier, grid_spec().tail_cutoff_threshold));

  const int N = n + 1;
  auto lrec = std::make_shared<detail::LdRecurrence>(r, n);
  const auto pi = orthonormal_values(r, n, imag_unit());
  Real enorm = 0;
  for (const auto& v : pi) enorm += norm(v);
  enorm = sqrt(enorm);

  detail::MinimaxProblem pr;
  pr.n_coeffs = N;
  pr.basis = [lrec](ld x, ld* out) { lrec->eval(x, out); };
  pr.weight = [&w](ld x) { return std::exp(-w.phi(std::fabs(x))) / std::hypot(1.0L, x); };
  // Scaled constraint sum c'_k e_k / |e| = 1 keeps the multipliers O(1);
  // c = c' / |e| afterwards.
  for (const auto& v : pi) pr.equality.push_back(detail::to_ld(v / enorm));
  const ld L = bulk_width(w, n, X);
  pr.grid = pricing_grid(L, X, n);
  pr.seeds = seed_points(2 * N + 2, std::min(L / 2, X));
  pr.tol = static_cast<ld>(opt.tol);
  pr.max_rounds = opt.max_iterations;
  const auto sol = detail::solve_minimax(pr);

  std::vector<Complex> c(N);
  for (int k = 0; k < N; ++k) c[k] = detail::from_ld(sol.c[k]) / enorm;
  const Complex at_i = series_at(r, c, imag_unit());
  for (auto& ck : c) ck /= at_i;

  auto log_f = [&](const Real& x) {
    return log(abs(series_at(r, c, x))) - w.phi(abs(x)) - log1p(x * x) / 2;
  };
  std::vector<cld> c_ld(N);
  for (int k = 0; k < N; ++k) c_ld[k] = detail::to_ld(c[k]);
  const SupResult sup = refine_sup(log_f, pr.grid, top_candidates(pr, c_ld));
  check_boundary(sup.x, X, "en_uniform(" + w.id() + ", n=" + std::to_string(n) + ")");

  ErrorRecord rec;
  rec.n = n;
  rec.p = kInfinityP;
  rec.weight_id = w.id();
  rec.precision_bits = working_precision_bits();
  fill_record_value(rec, sup.log_value);
  fill_poly(rec, detail::combine_monomial(orthonormal_monomials(r, n), c));

  // Dual objective evaluated through the support measure on the final
  // polynomial: sum_j y_j Re(e^{-i theta_j} P(x_j)) / W_1(x_j).
  Certificate& cert = rec.certificate;
  cert.kind = Certificate::Kind::MinimaxDual;
  Real ysum = 0;
  for (const auto& s : sol.support) ysum += Real(s.y);
  Real lower = 0;
  for (const auto& s : sol.support) {
    const Real x = s.x, th = s.theta;
    const Complex v = series_at(r, c, x);
    const Real proj = cos(th) * v.re + sin(th) * v.im;
    lower += Real(s.y) / ysum * proj * exp(-w.phi(abs(x))) / sqrt(1 + x * x);
    cert.support.push_back({x, th, Real(s.y) / ysum});
  }
  cert.lower_bound = lower;
  cert.upper_bound = rec.value;
  cert.relative_gap = (rec.value - lower) / rec.value;
  cert.iterations = sol.rounds;
  return rec;
}

// ---------------------------------------------------------------------------
// 1 <= p < inf

namespace {

struct LpSetup {
  MeasureGrid grid;
  Recurrence rec;
  detail::IrlsProblem problem;
};

LpSetup lp_setup(const Weight& w, int degree, int tier, const Density& d, double p,
                 const SolverOptions& opt) {
  LpSetup s;
  s.grid = build_measure_grid(w, tier, grid_spec(), d);
  s.rec = stieltjes(s.grid, std::max(degree, 0));
  detail::LdRecurrence lrec(s.rec, degree);
  const size_t N = s.grid.nodes.size();
  s.problem.V.assign(N, std::vector<ld>(degree + 1));
  s.problem.rho.resize(N);
  for (size_t j = 0; j < N; ++j) {
    lrec.eval(detail::to_ld(s.grid.nodes[j]), s.problem.V[j].data());
    s.problem.rho[j] = detail::to_ld(s.grid.weights[j]);
  }
  s.problem.p = p;
  s.problem.tol = opt.tol;
  s.problem.max_iterations = opt.max_iterations;
  return s;
}

// (sum_j rho_j |g(x_j)|^p)^{1/p} in log form.
Real log_lp_norm(const MeasureGrid& g, double p,
                 const std::function<Complex(const Real&)>& values) {
  Real s = 0;
  const Real rp = p;
  for (size_t j = 0; j < g.nodes.size(); ++j) {
    const Real a = abs(values(g.nodes[j]));
    if (a > 0) s += g.weights[j] * pow(a, rp);
  }
  return log(s) / rp;
}

}  // namespace

ErrorRecord en_lp(const Weight& w, int n, double p, const SolverOptions& opt) {
  if (!(p >= 1) || !std::isfinite(p)) fail(ErrorCode::Domain, "en_lp: need 1 <= p < inf");
  const int tier = tier_for(n, opt);
  PrecisionScope scope(solver_precision(n, opt));
  LpSetup s = lp_setup(w, n, tier, Density::lp(p), p, opt);
  const auto pi = orthonormal_values(s.rec, n, imag_unit());
  for (const auto& v : pi) s.problem.e.push_back(detail::to_ld(v));
  const auto sol = detail::solve_irls(s.problem);

  std::vector<Complex> c(n + 1);
  for (int k = 0; k <= n; ++k) c[k] = detail::from_ld(sol.c[k]);
  const Complex at_i = series_at(s.rec, c, imag_unit());
  for (auto& ck : c) ck /= at_i;

  ErrorRecord rec;
  rec.n = n;
  rec.p = p;
  rec.weight_id = w.id();
  rec.precision_bits = working_precision_bits();
  fill_record_value(rec, log_lp_norm(s.grid, p, [&](const Real& x) { return series_at(s.rec, c, x); }));
  fill_poly(rec, detail::combine_monomial(orthonormal_monomials(s.rec, n), c));
  rec.certificate.kind = Certificate::Kind::Reweighted;
  rec.certificate.iterations = sol.iterations;
  return rec;
}

ErrorRecord compute_en(const Weight& w, int n, double p, const SolverOptions& opt) {
  if (std::isinf(p) && p > 0) return en_uniform(w, n, opt);
  if (p == 2) return en_l2(w, n, opt);
  return en_lp(w, n, p, opt);
}

// ---------------------------------------------------------------------------
// Cauchy kernel form

namespace {

Complex cauchy_kernel(const Real& x) {
  const Real d = 1 + x * x;
  return {x / d, 1 / d};
}

CauchyApprox cauchy_finish(std::vector<Complex> q_orth, const Recurrence& r, int n, Real log_err) {
  CauchyApprox out;
  out.q = detail::combine_monomial(orthonormal_monomials(r, n - 1), q_orth);
  out.log_err = log_err;
  out.err = exp(log_err);
  // P = 1 - (x - i) Q.
  const PolyC lin({Complex(Real(0), Real(-1)), Complex(Real(1))});
  const PolyC prod = lin * out.q;
  std::vector<Complex> pc(std::max(prod.coeffs().size(), size_t(1)));
  pc[0] = Complex(Real(1));
  for (size_t k = 0; k < prod.coeffs().size(); ++k) pc[k] -= prod.coeffs()[k];
  out.p_poly = PolyC(std::move(pc));
  return out;
}

}  // namespace

CauchyApprox cauchy_best_approx(const Weight& w, int n, double p, const SolverOptions& opt) {
  if (!(p >= 1)) fail(ErrorCode::Domain, "cauchy_best_approx: need p >= 1");
  const int tier = tier_for(n, opt);
  PrecisionScope scope(solver_precision(n, opt));
  const bool uniform = std::isinf(p);

  if (uniform) {
    const Density nu = Density::nu();
    const ld X = detail::to_ld(measure_cutoff(w, nu, tier, grid_spec().tail_cutoff_threshold));
    auto log_f = [&w](const Real& x, const Complex& q) {
      return log(abs(cauchy_kernel(x) - q)) - w.phi(abs(x));
    };
    if (n == 0) {
      const std::vector<ld> grid = pricing_grid(bulk_width(w, 0, X), X, 0);
      auto lf = [&](const Real& x) { return log_f(x, Complex()); };
      const SupResult sup = refine_sup(lf, grid, {0});
      CauchyApprox out;
      out.log_err = sup.log_value;
      out.err = exp(sup.log_value);
      out.p_poly = PolyC({Complex(Real(1))});
      return out;
    }
    const Recurrence r = measure_recurrence(w, nu, tier, opt.cache);
    auto lrec = std::make_shared<detail::LdRecurrence>(r, n - 1);
    detail::MinimaxProblem pr;
    pr.n_coeffs = n;
    pr.basis = [lrec](ld x, ld* out) { lrec->eval(x, out); };
    pr.target = [](ld x) { return cld(x, 1) / (1 + x * x); };
    pr.weight = [&w](ld x) { return std::exp(-w.phi(std::fabs(x))); };
    const ld L = bulk_width(w, n, X);
    pr.grid = pricing_grid(L, X, n);
    pr.seeds = seed_points(2 * n + 2, std::min(L / 2, X));
    pr.tol = static_cast<ld>(opt.tol);
    pr.max_rounds = opt.max_iterations;
    const auto sol = detail::solve_minimax(pr);
    // Residual f + sum c_k q_k, so Q = -sum c_k q_k.
    std::vector<Complex> q(n);
    for (int k = 0; k < n; ++k) q[k] = -detail::from_ld(sol.c[k]);
    auto lf = [&](const Real& x) { return log_f(x, series_at(r, q, x)); };
    const SupResult sup = refine_sup(lf, pr.grid, top_candidates(pr, sol.c));
    check_boundary(sup.x, X, "cauchy_best_approx(" + w.id() + ", n=" + std::to_string(n) + ")");
    return cauchy_finish(std::move(q), r, n, sup.log_value);
  }

  const Density d = Density::nu_p(p);
  if (n == 0) {
    const MeasureGrid g = build_measure_grid(w, tier, grid_spec(), d);
    CauchyApprox out;
    out.log_err = log_lp_norm(g, p, cauchy_kernel);
    out.err = exp(out.log_err);
    out.p_poly = PolyC({Complex(Real(1))});
    return out;
  }
  if (p == 2) {
    const MeasureGrid g = build_measure_grid(w, tier, grid_spec(), d);
    const Recurrence r = stieltjes(g, n - 1);
    // Projection coefficients <f, q_k> in L2(dx / W^2).
    std::vector<Complex> q(n);
    for (size_t j = 0; j < g.nodes.size(); ++j) {
      const auto qk = orthonormal_values(r, n - 1, g.nodes[j]);
      const Complex fw = cauchy_kernel(g.nodes[j]) * g.weights[j];
      for (int k = 0; k < n; ++k) q[k] += fw * qk[k];
    }
    const Real log_err =
        log_lp_norm(g, 2, [&](const Real& x) { return cauchy_kernel(x) - series_at(r, q, x); });
    return cauchy_finish(std::move(q), r, n, log_err);
  }
  LpSetup s = lp_setup(w, n - 1, tier, d, p, opt);
  for (const auto& x : s.grid.nodes) s.problem.f.push_back(detail::to_ld(cauchy_kernel(x)));
  const auto sol = detail::solve_irls(s.problem);
  std::vector<Complex> q(n);
  for (int k = 0; k < n; ++k) q[k] = -detail::from_ld(sol.c[k]);
  const Real log_err = log_lp_norm(
      s.grid, p, [&](const Real& x) { return cauchy_kernel(x) - series_at(s.rec, q, x); });
  return cauchy_finish(std::move(q), s.rec, n, log_err);
}

}  // namespace bernstein
