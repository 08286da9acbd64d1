#include <algorithm>
#include <cmath>

#include "bernstein/extremal.hpp"
#include "bernstein/rates.hpp"

namespace bernstein {

MarkovCheck markov_lemma_check(const PolyC& q_in, const Real& a, double p, int n) {
  if (!(a > 0)) fail(ErrorCode::Domain, "markov_lemma_check: a must be positive");
  if (!(p >= 1) || !std::isfinite(p)) fail(ErrorCode::Domain, "markov_lemma_check: need p >= 1");
  const PolyC q = q_in.to_monomial();
  const int deg = std::max(q.degree(), 0);
  if (n < 0) n = std::max(deg, 1);
  if (n < std::max(deg, 1)) fail(ErrorCode::Domain, "markov_lemma_check: n below the degree");
  const Real rp = p;
  auto absq = [&q](const Real& x) { return abs(q(x)); };

  // Maximum of |q| on [-a, a]: sampling, then golden refinement of the best cells.
  MarkovCheck out;
  Real best = 0;
  if (!q.is_zero()) {
    const int samples = 4000;
    std::vector<Real> xs(samples + 1), vs(samples + 1);
    for (int j = 0; j <= samples; ++j) {
      xs[j] = -a + 2 * a * j / samples;
      vs[j] = absq(xs[j]);
      best = std::max(best, vs[j]);
    }
    std::vector<int> order(samples + 1);
    for (int j = 0; j <= samples; ++j) order[j] = j;
    std::partial_sort(order.begin(), order.begin() + 8, order.end(),
                      [&](int i, int j) { return vs[i] > vs[j]; });
    const Real x_tol = epsilon_power(0.25) * a;
    for (int k = 0; k < 8; ++k) {
      const int j = order[k];
      const Real lo = xs[std::max(j - 1, 0)], hi = xs[std::min(j + 1, samples)];
      best = std::max(best, golden_maximize(absq, lo, hi, x_tol).value);
    }
  }
  out.max_p = pow(best, rp);

  // Integral of |q|^p with breaks at real roots inside (-a, a).
  std::vector<Real> breaks{-a, a};
  if (q.degree() >= 1) {
    const Real imag_tol = epsilon_power(0.25);
    for (const auto& z : find_roots(q)) {
      if (abs(z.im) <= imag_tol * std::max(Real(1), abs(z.re)) && abs(z.re) < a) {
        breaks.push_back(z.re);
      }
    }
  }
  std::sort(breaks.begin(), breaks.end());
  breaks.erase(std::unique(breaks.begin(), breaks.end()), breaks.end());
  const Real integral = q.is_zero() ? Real(0)
                                    : integrate([&](const Real& x) { return pow(absq(x), rp); },
                                                breaks,
                                                QuadratureSpec::standard(QuadratureSpec::Scheme::GaussPanels));
  out.bound = pow(Real(2), rp + 2) * Real(n) * n / a * integral;
  out.pass = out.max_p <= out.bound * (1 + epsilon_power(0.5));
  return out;
}

RateReport sandwich_report(const Weight& w, double p, const std::vector<int>& ns,
                           const SolverOptions& opt) {
  if (ns.empty()) fail(ErrorCode::DegenerateInput, "sandwich_report: empty n list");
  RateReport rep;
  rep.weight_id = w.id();
  rep.p = p;
  // One grid tier and one recurrence for the whole sweep.
  SolverOptions o = opt;
  const int n_top = *std::max_element(ns.begin(), ns.end());
  if (o.n_max <= 0) o.n_max = degree_tier(n_top);
  RecurrenceCache local;
  if (!o.cache) o.cache = &local;
  PrecisionScope scope(solver_precision(n_top, o));
  const Real phi1 = w.phi(Real(1));
  for (int n : ns) {
    if (Real(n) < phi1) {
      fail(ErrorCode::Precondition, "sandwich_report: n = " + std::to_string(n) +
                                        " is below phi(1) for " + w.id());
    }
    RateRow row;
    row.n = n;
    row.record = compute_en(w, n, p, o);
    row.R = rate_integral(w, n).R;
    row.neg_log_en = -row.record.log_value;
    row.ratio = row.neg_log_en / row.R;
    rep.rows.push_back(std::move(row));
  }
  Real lo = rep.rows.front().ratio, hi = lo;
  for (const auto& r : rep.rows) {
    lo = std::min(lo, r.ratio);
    hi = std::max(hi, r.ratio);
  }
  rep.ratio_spread = lo > 0 ? Real(hi / lo) : infinity();
  if (rep.rows.size() >= 4 && lo > 0) {
    std::vector<std::pair<Real, Real>> ratio_pts, en_pts;
    for (const auto& r : rep.rows) {
      ratio_pts.emplace_back(Real(r.n), r.ratio);
      en_pts.emplace_back(Real(r.n), r.neg_log_en);
    }
    rep.ratio_slope = fit_loglog_slope(ratio_pts).slope;
    rep.en_slope = fit_loglog_slope(en_pts).slope;
  }
  return rep;
}

}  // namespace bernstein
