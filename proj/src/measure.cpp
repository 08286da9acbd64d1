#include <algorithm>
#include <cmath>
#include <sstream>

#include "bernstein/extremal.hpp"

namespace bernstein {

Density Density::mu() { return Density{"mu", Real(2), Real(1)}; }
Density Density::nu() { return Density{"nu", Real(2), Real(0)}; }

Density Density::lp(double p) {
  if (!(p >= 1) || !std::isfinite(p)) fail(ErrorCode::Domain, "Density::lp: need 1 <= p < inf");
  std::ostringstream tag;
  tag.precision(17);
  tag << "lp" << p;
  Real rp = p;
  return Density{tag.str(), rp, rp / 2};
}

Density Density::nu_p(double p) {
  if (!(p >= 1) || !std::isfinite(p)) fail(ErrorCode::Domain, "Density::nu_p: need 1 <= p < inf");
  std::ostringstream tag;
  tag.precision(17);
  tag << "nu" << p;
  return Density{tag.str(), Real(p), Real(0)};
}

Real Density::log_value(const Weight& w, const Real& x) const {
  Real ax = abs(x);
  Real out = -s * w.phi(ax);
  if (beta != 0) out -= beta * log1p(x * x);
  return out;
}

Real measure_cutoff(const Weight& w, const Density& d, int n_max, const Real& threshold) {
  if (!(threshold > 0 && threshold < 1)) {
    fail(ErrorCode::Domain, "measure_cutoff: threshold must lie in (0, 1)");
  }
  const Real drop = -log(threshold);
  auto log_f = [&](const Real& x) { return 2 * n_max * log(x) + d.log_value(w, x); };
  Real x = 1;
  Real peak = log_f(x);
  Real last = peak;
  for (int k = 0; k <= 60; ++k) {
    Real v = log_f(x);
    if (v > peak) peak = v;
    if (k > 0 && v < last && v < peak - drop) return x;
    last = v;
    x *= 2;
  }
  fail(ErrorCode::NonConvergence,
       "measure cutoff search for " + w.id() + " exceeded 2^60 (weight grows too slowly)");
}

namespace {

struct PanelEval {
  Real a, b;
  std::vector<Real> nodes, weights;
  std::vector<Real> moments;  // even moments 0, 2, ..., 2K
};

PanelEval eval_panel(const Weight& w, const Density& d, const GaussRule& rule, const Real& a,
                     const Real& b, int K) {
  PanelEval p;
  p.a = a;
  p.b = b;
  const Real c = (a + b) / 2;
  const Real h = (b - a) / 2;
  const size_t m = rule.nodes.size();
  p.nodes.resize(m);
  p.weights.resize(m);
  p.moments.assign(K + 1, Real(0));
  for (size_t j = 0; j < m; ++j) {
    Real x = c + h * rule.nodes[j];
    Real wt = h * rule.weights[j] * exp(d.log_value(w, x));
    Real x2 = x * x;
    Real acc = wt;
    for (int k = 0; k <= K; ++k) {
      p.moments[k] += acc;
      acc *= x2;
    }
    p.nodes[j] = std::move(x);
    p.weights[j] = std::move(wt);
  }
  return p;
}

}  // namespace

MeasureGrid build_measure_grid(const Weight& w, int n_max, const QuadratureSpec& spec,
                               const Density& d, const GridOptions& opt) {
  spec.validate();
  if (n_max < 0) fail(ErrorCode::Domain, "build_measure_grid: n_max must be non-negative");
  const unsigned bits = working_precision_bits();
  const Real tol = opt.tol > 0 ? opt.tol : epsilon_power(0.5);
  const int order = opt.gauss_order > 0 ? opt.gauss_order : std::max(20, static_cast<int>(bits / 12));
  const GaussRule& rule = gauss_legendre(order);
  const int K = n_max + 1;
  const int max_depth = opt.max_depth > 0 ? opt.max_depth : static_cast<int>(bits / 2) + 40;

  MeasureGrid grid;
  grid.n_max = n_max;
  grid.density_tag = d.tag;
  grid.cutoff_X = measure_cutoff(w, d, n_max, spec.tail_cutoff_threshold);

  std::vector<Real> breaks = weight_breaks(w, Real(0), grid.cutoff_X);
  std::vector<PanelEval> seeds;
  std::vector<Real> scale(K + 1, Real(0));
  for (size_t k = 1; k < breaks.size(); ++k) {
    seeds.push_back(eval_panel(w, d, rule, breaks[k - 1], breaks[k], K));
    for (int j = 0; j <= K; ++j) scale[j] += seeds.back().moments[j];
  }

  std::vector<Real> pos_nodes, pos_weights;
  struct Item {
    PanelEval whole;
    int depth;
  };
  std::vector<Item> stack;
  for (auto it = seeds.rbegin(); it != seeds.rend(); ++it) stack.push_back({std::move(*it), 0});
  while (!stack.empty()) {
    Item item = std::move(stack.back());
    stack.pop_back();
    const Real mid = (item.whole.a + item.whole.b) / 2;
    PanelEval left = eval_panel(w, d, rule, item.whole.a, mid, K);
    PanelEval right = eval_panel(w, d, rule, mid, item.whole.b, K);
    bool ok = true;
    for (int k = 0; k <= K && ok; ++k) {
      Real diff = abs(item.whole.moments[k] - left.moments[k] - right.moments[k]);
      ok = diff <= tol * scale[k];
    }
    if (ok) {
      for (auto* half : {&left, &right}) {
        for (size_t j = 0; j < half->nodes.size(); ++j) {
          pos_nodes.push_back(std::move(half->nodes[j]));
          pos_weights.push_back(std::move(half->weights[j]));
        }
      }
      continue;
    }
    if (item.depth + 1 > max_depth) {
      fail(ErrorCode::NonConvergence, "measure grid for " + w.id() +
                                          ": panel refinement exceeded depth " +
                                          std::to_string(max_depth));
    }
    // Right first so the left half is refined next: nodes come out ascending.
    stack.push_back({std::move(right), item.depth + 1});
    stack.push_back({std::move(left), item.depth + 1});
  }

  const size_t m = pos_nodes.size();
  grid.nodes.reserve(2 * m);
  grid.weights.reserve(2 * m);
  for (size_t j = m; j-- > 0;) {
    grid.nodes.push_back(-pos_nodes[j]);
    grid.weights.push_back(pos_weights[j]);
  }
  for (size_t j = 0; j < m; ++j) {
    grid.nodes.push_back(std::move(pos_nodes[j]));
    grid.weights.push_back(std::move(pos_weights[j]));
  }
  return grid;
}

// ---------------------------------------------------------------------------

Recurrence stieltjes(const std::vector<Real>& nodes, const std::vector<Real>& weights, int n) {
  if (nodes.size() != weights.size() || nodes.empty()) {
    fail(ErrorCode::Domain, "stieltjes: nodes and weights must be non-empty and equal length");
  }
  if (n < 0) fail(ErrorCode::Domain, "stieltjes: degree must be non-negative");
  if (nodes.size() <= static_cast<size_t>(n + 1)) {
    fail(ErrorCode::Domain, "stieltjes: grid has too few nodes for the degree");
  }
  const size_t N = nodes.size();
  Recurrence r;
  r.a.resize(n + 1);
  r.b.resize(n + 2);
  Real mass = 0;
  for (const auto& wt : weights) mass += wt;
  if (!(mass > 0)) fail(ErrorCode::PrecisionLoss, "stieltjes: total mass is not positive");
  r.b[0] = mass;

  std::vector<Real> prev(N, Real(0));
  std::vector<Real> cur(N, 1 / sqrt(mass));
  std::vector<Real> next(N);
  Real sqrt_b = 0;
  for (int k = 0; k <= n; ++k) {
    Real a = 0;
    for (size_t j = 0; j < N; ++j) a += weights[j] * nodes[j] * cur[j] * cur[j];
    r.a[k] = a;
    Real norm2 = 0;
    for (size_t j = 0; j < N; ++j) {
      next[j] = (nodes[j] - a) * cur[j] - sqrt_b * prev[j];
      norm2 += weights[j] * next[j] * next[j];
    }
    if (!(norm2 > 0)) {
      fail(ErrorCode::PrecisionLoss, "stieltjes: squared norm " + to_decimal(norm2, 6) +
                                         " at degree " + std::to_string(k + 1) +
                                         " is not positive");
    }
    r.b[k + 1] = norm2;
    sqrt_b = sqrt(norm2);
    Real inv = 1 / sqrt_b;
    for (size_t j = 0; j < N; ++j) {
      prev[j] = std::move(cur[j]);
      cur[j] = next[j] * inv;
    }
  }
  return r;
}

Recurrence stieltjes(const MeasureGrid& grid, int n) {
  return stieltjes(grid.nodes, grid.weights, n);
}

namespace {

template <typename T>
std::vector<T> recurrence_values(const Recurrence& r, int n, const T& z) {
  if (n > r.degree()) fail(ErrorCode::Domain, "recurrence evaluated beyond its degree");
  std::vector<T> p(n + 1);
  p[0] = T(Real(1) / sqrt(r.b[0]));
  if (n == 0) return p;
  Real sb_prev = 0;
  for (int k = 0; k < n; ++k) {
    Real sb = sqrt(r.b[k + 1]);
    T t = (z - T(r.a[k])) * p[k];
    if (k > 0) t -= p[k - 1] * sb_prev;
    p[k + 1] = t / sb;
    sb_prev = std::move(sb);
  }
  return p;
}

}  // namespace

std::vector<Complex> orthonormal_values(const Recurrence& r, int n, const Complex& z) {
  return recurrence_values<Complex>(r, n, z);
}

std::vector<Real> orthonormal_values(const Recurrence& r, int n, const Real& x) {
  return recurrence_values<Real>(r, n, x);
}

std::vector<std::vector<Real>> orthonormal_monomials(const Recurrence& r, int n) {
  if (n > r.degree()) fail(ErrorCode::Domain, "recurrence evaluated beyond its degree");
  std::vector<std::vector<Real>> p(n + 1);
  p[0] = {Real(1) / sqrt(r.b[0])};
  for (int k = 0; k < n; ++k) {
    Real sb = sqrt(r.b[k + 1]);
    std::vector<Real> t(k + 2, Real(0));
    for (int j = 0; j <= k; ++j) {
      t[j + 1] += p[k][j];
      t[j] -= r.a[k] * p[k][j];
    }
    if (k > 0) {
      Real sp = sqrt(r.b[k]);
      for (int j = 0; j < k; ++j) t[j] -= sp * p[k - 1][j];
    }
    for (auto& c : t) c /= sb;
    p[k + 1] = std::move(t);
  }
  return p;
}

}  // namespace bernstein
