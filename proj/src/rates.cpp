#include "bernstein/rates.hpp"

#include <algorithm>

namespace bernstein {

namespace {

QuadratureSpec panel_spec() {
  return QuadratureSpec::standard(QuadratureSpec::Scheme::GaussPanels);
}

Real poisson_integral(const Weight& w, const Real& a) {
  if (a == 0) return Real(0);
  return integrate([&w](const Real& x) { return w.phi(x) / (x * x + 1); },
                   weight_breaks(w, Real(0), a), panel_spec());
}

}  // namespace

RateValue rate_integral(const Weight& w, int n) {
  if (n < 0) fail(ErrorCode::Domain, "rate_integral: n must be non-negative");
  RateValue out;
  out.n = n;
  const Real rn = n;
  if (rn < w.phi0()) {
    out.R = rn;
    out.tail_part = rn;
    out.bulk_part = 0;
    out.poisson_part = 0;
    out.a_n = 0;
    out.below_unit_scale = true;
    return out;
  }
  out.a_n = w.a_n(rn);
  out.poisson_part = poisson_integral(w, out.a_n);
  if (rn < w.phi(Real(1))) {
    out.R = rn;
    out.tail_part = rn;
    out.bulk_part = 0;
    out.below_unit_scale = true;
    return out;
  }
  out.tail_part = rn / out.a_n;
  out.bulk_part = integrate([&w](const Real& u) { return w.phi(u) / (u * u); },
                            weight_breaks(w, Real(1), out.a_n), panel_spec());
  out.R = out.bulk_part + out.tail_part;
  return out;
}

Real corollary_rate(const Weight& w, int n) {
  if (n < 2) fail(ErrorCode::Domain, "corollary_rate: n must be at least 2");
  const Real rn = n;
  const Real nu = w.family() == Family::Tabulated || w.nu_text().empty()
                      ? Real(0)
                      : parse_real(w.nu_text());
  switch (w.family()) {
    case Family::RationalLog: return log(log(rn + const_e()));
    case Family::PowerLog: return pow(log(rn), nu + 1);
    case Family::Power: return pow(rn, 1 - 1 / nu);
    case Family::ExpPower: return rn / pow(log(rn), 1 / nu);
    case Family::Tabulated: break;
  }
  fail(ErrorCode::Family, "corollary_rate: no closed form for tabulated weight " + w.id());
}

Lemma4Value lemma4_compare(const Weight& w, const GrowthClass& cls, const Real& a) {
  if (a < 1) fail(ErrorCode::Domain, "lemma4_compare: a must be at least 1");
  Lemma4Value v;
  switch (cls.kind) {
    case GrowthKind::Normal: v.direction = Lemma4Direction::AtLeast; break;
    case GrowthKind::Rapid: v.direction = Lemma4Direction::AtMost; break;
    case GrowthKind::Both: v.direction = Lemma4Direction::Both; break;
    case GrowthKind::Unknown:
      fail(ErrorCode::Class, "lemma4_compare: growth class of " + w.id() + " is unknown");
  }
  v.a = a;
  v.integral = poisson_integral(w, a);
  v.scale = w.phi(a) / a;
  v.ratio = v.integral / v.scale;
  return v;
}

Lemma4Sweep lemma4_sweep(const Weight& w, const GrowthClass& cls, const std::vector<Real>& as) {
  if (as.size() < 4) fail(ErrorCode::DegenerateInput, "lemma4_sweep: need at least 4 points");
  Lemma4Sweep s;
  std::vector<std::pair<Real, Real>> fit;
  for (const auto& a : as) {
    s.points.push_back(lemma4_compare(w, cls, a));
    fit.emplace_back(a, s.points.back().ratio);
  }
  s.c_low = s.points.front().ratio;
  s.c_high = s.c_low;
  for (const auto& p : s.points) {
    s.c_low = std::min(s.c_low, p.ratio);
    s.c_high = std::max(s.c_high, p.ratio);
  }
  // Only the upper half of the sweep speaks to the asymptotic direction.
  const size_t half = std::min(fit.size() / 2, fit.size() - 4);
  s.slope = fit_loglog_slope({fit.begin() + static_cast<long>(half), fit.end()}).slope;
  // A constant exists in the stated direction iff the ratio does not drift
  // the other way.
  const Real drift = Real(0.05);
  const bool at_least = s.slope >= -drift && s.c_low > 0;
  const bool at_most = s.slope <= drift;
  switch (s.points.front().direction) {
    case Lemma4Direction::AtLeast: s.pass = at_least; break;
    case Lemma4Direction::AtMost: s.pass = at_most; break;
    case Lemma4Direction::Both: s.pass = at_least && at_most; break;
  }
  return s;
}

SlopeFit fit_loglog_slope(const std::vector<std::pair<Real, Real>>& points) {
  if (points.size() < 4) fail(ErrorCode::DegenerateInput, "fit_loglog_slope: need >= 4 points");
  const size_t m = points.size();
  std::vector<Real> xs(m), ys(m);
  Real mx = 0, my = 0;
  for (size_t k = 0; k < m; ++k) {
    if (!(points[k].first > 0) || !(points[k].second > 0)) {
      fail(ErrorCode::Domain, "fit_loglog_slope: all n and values must be positive");
    }
    xs[k] = log(points[k].first);
    ys[k] = log(points[k].second);
    mx += xs[k];
    my += ys[k];
  }
  mx /= m;
  my /= m;
  Real sxx = 0, sxy = 0, syy = 0;
  for (size_t k = 0; k < m; ++k) {
    sxx += (xs[k] - mx) * (xs[k] - mx);
    sxy += (xs[k] - mx) * (ys[k] - my);
    syy += (ys[k] - my) * (ys[k] - my);
  }
  if (sxx == 0) fail(ErrorCode::DegenerateInput, "fit_loglog_slope: all n are equal");
  SlopeFit f;
  f.slope = sxy / sxx;
  f.intercept = my - f.slope * mx;
  f.r_squared = syy == 0 ? Real(1) : Real(sxy * sxy / (sxx * syy));
  return f;
}

}  // namespace bernstein
