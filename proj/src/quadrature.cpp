#include <algorithm>
#include <cmath>
#include <map>
#include <queue>

#include "bernstein/numerics.hpp"

namespace bernstein {

QuadratureSpec QuadratureSpec::standard(Scheme scheme) {
  QuadratureSpec spec;
  spec.scheme = scheme;
  spec.rel_tol = epsilon_power(0.5);
  spec.tail_cutoff_threshold = epsilon_power(0.5);
  spec.gauss_order = std::max(20, static_cast<int>(working_precision_bits() / 12));
  return spec;
}

void QuadratureSpec::validate() const {
  if (!(rel_tol > 0 && rel_tol < 1)) {
    fail(ErrorCode::Domain, "QuadratureSpec: rel_tol must lie in (0, 1)");
  }
  if (!(tail_cutoff_threshold > 0) || tail_cutoff_threshold > epsilon_power(0.5)) {
    fail(ErrorCode::Domain,
         "QuadratureSpec: tail_cutoff_threshold must be positive and <= 2^(-bits/2)");
  }
  if (max_depth < 1 || gauss_order < 2) {
    fail(ErrorCode::Domain, "QuadratureSpec: max_depth >= 1 and gauss_order >= 2 required");
  }
}

// ---------------------------------------------------------------------------
// Gauss-Legendre nodes by Newton iteration on the three-term recurrence.

const GaussRule& gauss_legendre(int order) {
  static std::mutex mutex;
  static std::map<std::pair<int, unsigned>, GaussRule> cache;
  const unsigned bits = working_precision_bits();
  std::lock_guard<std::mutex> lock(mutex);
  auto key = std::make_pair(order, bits);
  if (auto it = cache.find(key); it != cache.end()) return it->second;

  GaussRule rule;
  rule.nodes.resize(order);
  rule.weights.resize(order);
  const Real stop = epsilon_power(0.95);
  const int half = (order + 1) / 2;
  for (int i = 0; i < half; ++i) {
    Real x = std::cos(M_PI * (i + 0.75) / (order + 0.5));
    Real dp;
    for (int iter = 0; iter < 100; ++iter) {
      Real p0 = 1;
      Real p1 = x;
      for (int k = 2; k <= order; ++k) {
        Real p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
        p0 = std::move(p1);
        p1 = std::move(p2);
      }
      // p1 = P_order(x), p0 = P_{order-1}(x)
      dp = order * (x * p1 - p0) / (x * x - 1);
      Real dx = p1 / dp;
      x -= dx;
      if (abs(dx) <= stop) break;
    }
    {
      Real p0 = 1;
      Real p1 = x;
      for (int k = 2; k <= order; ++k) {
        Real p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
        p0 = std::move(p1);
        p1 = std::move(p2);
      }
      dp = order * (x * p1 - p0) / (x * x - 1);
    }
    Real w = 2 / ((1 - x * x) * dp * dp);
    rule.nodes[i] = -x;
    rule.weights[i] = w;
    rule.nodes[order - 1 - i] = x;
    rule.weights[order - 1 - i] = w;
  }
  if (order % 2 == 1) rule.nodes[order / 2] = 0;
  return cache.emplace(key, std::move(rule)).first->second;
}

namespace {

// Tanh-sinh on a finite interval with level doubling.
Real tanh_sinh_finite(const RealFunction& f, const Real& a, const Real& b,
                      const QuadratureSpec& spec) {
  if (a == b) return Real(0);
  const Real c = (a + b) / 2;
  const Real h = (b - a) / 2;
  const Real half_pi = const_pi() / 2;
  const unsigned bits = working_precision_bits();
  // Beyond t_max the endpoint distance falls under 2^-(bits+16) of the width.
  const Real s_max = Real(bits + 16) * const_ln2() / 2;
  const Real t_max = asinh(s_max / half_pi);

  auto node_sum = [&](const Real& t, Real& abs_sum) -> Real {
    // Contribution of +t and -t (or just t = 0).
    if (t == 0) {
      Real v = f(c) * half_pi;
      abs_sum += abs(v);
      return v;
    }
    Real s = half_pi * sinh(t);
    Real cs = cosh(s);
    Real w = half_pi * cosh(t) / (cs * cs);
    Real d = h * exp(-s) / cs;  // distance to the endpoint
    Real v = w * (f(b - d) + f(a + d));
    abs_sum += abs(v);
    return v;
  };

  Real step = 1;
  Real sum = 0;
  Real abs_sum = 0;
  for (Real t = 0; t <= t_max; t += step) sum += node_sum(t, abs_sum);
  Real estimate = h * step * sum;
  for (int level = 1; level <= spec.max_depth; ++level) {
    step /= 2;
    Real added = 0;
    for (Real t = step; t <= t_max; t += 2 * step) added += node_sum(t, abs_sum);
    sum += added;
    Real next = h * step * sum;
    Real diff = abs(next - estimate);
    estimate = std::move(next);
    Real scale = std::max(abs(estimate), Real(h * step * abs_sum * spec.rel_tol));
    if (level >= 3 && diff <= spec.rel_tol * scale) return estimate;
  }
  fail(ErrorCode::NonConvergence,
       "tanh-sinh: no convergence after " + std::to_string(spec.max_depth) + " levels");
}

struct Panel {
  Real a, b, value, error;
  bool operator<(const Panel& o) const { return error < o.error; }
};

Real gauss_on(const RealFunction& f, const Real& a, const Real& b, const GaussRule& rule) {
  Real c = (a + b) / 2;
  Real h = (b - a) / 2;
  Real s = 0;
  for (size_t i = 0; i < rule.nodes.size(); ++i) s += rule.weights[i] * f(c + h * rule.nodes[i]);
  return h * s;
}

Panel make_panel(const RealFunction& f, const Real& a, const Real& b, const GaussRule& rule) {
  Real m = (a + b) / 2;
  Real whole = gauss_on(f, a, b, rule);
  Real halves = gauss_on(f, a, m, rule) + gauss_on(f, m, b, rule);
  return Panel{a, b, halves, abs(whole - halves)};
}

// Globally adaptive composite Gauss-Legendre over a list of seed intervals.
Real gauss_panels(const RealFunction& f, const std::vector<std::pair<Real, Real>>& seeds,
                  const QuadratureSpec& spec) {
  const GaussRule& rule = gauss_legendre(spec.gauss_order);
  std::priority_queue<Panel> queue;
  Real total = 0;
  Real abs_total = 0;
  Real err = 0;
  auto push = [&](Panel p) {
    total += p.value;
    abs_total += abs(p.value);
    err += p.error;
    queue.push(std::move(p));
  };
  for (const auto& [a, b] : seeds) {
    if (a != b) push(make_panel(f, a, b, rule));
  }
  const size_t cap = size_t{1} << std::min(spec.max_depth + 4, 24);
  while (!queue.empty()) {
    if (err <= spec.rel_tol * std::max(abs(total), Real(abs_total * spec.rel_tol))) {
      // Running sums drift; report a fresh sum.
      Real exact = 0;
      while (!queue.empty()) {
        exact += queue.top().value;
        queue.pop();
      }
      return exact;
    }
    if (queue.size() >= cap) {
      fail(ErrorCode::NonConvergence, "gauss panels: refinement exceeded panel cap");
    }
    Panel worst = queue.top();
    queue.pop();
    total -= worst.value;
    abs_total -= abs(worst.value);
    err -= worst.error;
    Real m = (worst.a + worst.b) / 2;
    if (m == worst.a || m == worst.b) {
      fail(ErrorCode::NonConvergence, "gauss panels: panel collapsed below resolution");
    }
    push(make_panel(f, worst.a, m, rule));
    push(make_panel(f, m, worst.b, rule));
  }
  return Real(0);
}

// Dyadic segments a, a+1, a+2, a+4, ... up to x_end.
std::vector<std::pair<Real, Real>> dyadic_segments(const Real& a, const Real& x_end) {
  std::vector<std::pair<Real, Real>> out;
  Real lo = a;
  Real width = 1;
  while (lo < x_end) {
    Real hi = lo + width;
    if (hi > x_end) hi = x_end;
    out.emplace_back(lo, hi);
    lo = hi;
    if (out.size() > 1) width *= 2;
  }
  return out;
}

// Smallest doubling distance beyond which |f| stays under the cutoff.
Real tail_extent(const RealFunction& f, const Real& a, int direction, const QuadratureSpec& spec) {
  Real max_seen = 1;
  int below = 0;
  Real dist = 1;
  for (int k = 0; k < 200; ++k) {
    Real x = a + direction * dist;
    Real v = abs(f(x));
    if (!is_finite(v)) fail(ErrorCode::NonConvergence, "integrand not finite on tail");
    if (v > max_seen) max_seen = v;
    below = v < spec.tail_cutoff_threshold * max_seen ? below + 1 : 0;
    if (below >= 2) return dist;
    dist *= 2;
  }
  fail(ErrorCode::NonConvergence, "integrand does not decay below the tail threshold");
}

Real integrate_finite(const RealFunction& f, const Real& a, const Real& b,
                      const QuadratureSpec& spec) {
  if (spec.scheme == QuadratureSpec::Scheme::TanhSinh) return tanh_sinh_finite(f, a, b, spec);
  return gauss_panels(f, {{a, b}}, spec);
}

Real integrate_segments(const RealFunction& f, const std::vector<std::pair<Real, Real>>& segs,
                        const QuadratureSpec& spec) {
  if (spec.scheme == QuadratureSpec::Scheme::GaussPanels) return gauss_panels(f, segs, spec);
  Real total = 0;
  for (const auto& [lo, hi] : segs) total += tanh_sinh_finite(f, lo, hi, spec);
  return total;
}

}  // namespace

Real integrate(const RealFunction& f, const Real& a, const Real& b, const QuadratureSpec& spec) {
  spec.validate();
  if (a == b) return Real(0);
  if (a > b) return -integrate(f, b, a, spec);
  const bool a_inf = !is_finite(a);
  const bool b_inf = !is_finite(b);
  if (!a_inf && !b_inf) return integrate_finite(f, a, b, spec);
  if (a_inf && b_inf) {
    return integrate(f, -infinity(), Real(0), spec) + integrate(f, Real(0), infinity(), spec);
  }
  if (b_inf) {
    Real extent = tail_extent(f, a, +1, spec);
    return integrate_segments(f, dyadic_segments(a, a + extent), spec);
  }
  // (-inf, b]: reflect onto [-b, inf).
  RealFunction g = [&f](const Real& x) { return f(-x); };
  Real extent = tail_extent(g, -b, +1, spec);
  return integrate_segments(g, dyadic_segments(-b, -b + extent), spec);
}

Real integrate(const RealFunction& f, const std::vector<Real>& breaks,
               const QuadratureSpec& spec) {
  spec.validate();
  std::vector<std::pair<Real, Real>> segs;
  for (size_t k = 1; k < breaks.size(); ++k) {
    if (!is_finite(breaks[k - 1]) || !is_finite(breaks[k]) || breaks[k] < breaks[k - 1]) {
      fail(ErrorCode::Domain, "integrate: break points must be finite and non-decreasing");
    }
    if (breaks[k] > breaks[k - 1]) segs.emplace_back(breaks[k - 1], breaks[k]);
  }
  if (segs.empty()) return Real(0);
  return integrate_segments(f, segs, spec);
}

std::vector<Real> dyadic_breaks(const Real& b) {
  std::vector<Real> out{Real(0)};
  Real x = 1;
  while (x < b) {
    out.push_back(x);
    x *= 2;
  }
  if (b > 0) out.push_back(b);
  return out;
}

}  // namespace bernstein
