#include "minimax.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <boost/math/tools/minima.hpp>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "bernstein/errors.hpp"

namespace bernstein::detail {

namespace {

using Vec = Eigen::Matrix<ld, Eigen::Dynamic, 1>;
using Mat = Eigen::Matrix<ld, Eigen::Dynamic, Eigen::Dynamic>;

constexpr ld kPi = 3.141592653589793238462643383279502884L;

struct Column {
  enum class Kind { Point, Free, Artificial };
  Kind kind = Kind::Point;
  ld x = 0;
  ld theta = 0;
  ld cost = 0;
  int partner = -1;  ///< opposite half of a split free variable
  Vec a;
};

// Dual of the restricted epigraph problem, in standard form
//   max cost.y  s.t.  A y = rhs, y >= 0.
// Rows 0 .. 2N-1 carry stationarity in (Re c_k, Im c_k), the last row sum y = 1.
class DualLp {
 public:
  explicit DualLp(int m) : m_(m), rhs_(Vec::Zero(m)) { rhs_(m - 1) = 1; }

  int rows() const { return m_; }
  std::vector<Column>& columns() { return cols_; }
  const std::vector<int>& basis() const { return basis_; }
  const Vec& values() const { return xb_; }
  int pivots() const { return pivots_; }

  void add(Column c) {
    cols_.push_back(std::move(c));
    in_basis_.push_back(0);
  }

  void start_phase1() {
    phase_ = 1;
    basis_.resize(m_);
    for (int r = 0; r < m_; ++r) {
      Column art;
      art.kind = Column::Kind::Artificial;
      art.a = Vec::Zero(m_);
      art.a(r) = 1;
      add(std::move(art));
      basis_[r] = static_cast<int>(cols_.size()) - 1;
      in_basis_.back() = 1;
    }
    binv_ = Mat::Identity(m_, m_);
    xb_ = rhs_;
  }

  void run() { iterate(); }

  void finish_phase1() {
    ld infeas = 0;
    for (int r = 0; r < m_; ++r) {
      if (cols_[basis_[r]].kind == Column::Kind::Artificial) infeas += xb_(r);
    }
    if (infeas > 1e-9L) fail(ErrorCode::NonConvergence, "minimax: restricted dual is infeasible");
    for (int r = 0; r < m_; ++r) {
      if (cols_[basis_[r]].kind != Column::Kind::Artificial) continue;
      int best = -1;
      ld best_abs = 1e-9L;
      for (size_t j = 0; j < cols_.size(); ++j) {
        if (in_basis_[j] || cols_[j].kind == Column::Kind::Artificial) continue;
        if (cols_[j].partner >= 0 && in_basis_[cols_[j].partner]) continue;
        ld v = std::abs(binv_.row(r).dot(cols_[j].a));
        if (v > best_abs) {
          best_abs = v;
          best = static_cast<int>(j);
        }
      }
      // A row with no candidate is redundant; its artificial stays basic at zero.
      if (best >= 0) pivot(best, r, binv_ * cols_[best].a);
    }
    phase_ = 2;
  }

  ld objective() const {
    ld s = 0;
    for (int r = 0; r < m_; ++r) s += cost(basis_[r]) * xb_(r);
    return s;
  }

  Vec duals() const {
    Vec cb(m_);
    for (int r = 0; r < m_; ++r) cb(r) = cost(basis_[r]);
    return binv_.transpose() * cb;
  }

  // Drops the nonbasic point columns with the most negative reduced costs.
  void prune(size_t keep_points) {
    size_t points = 0;
    for (const auto& c : cols_) points += c.kind == Column::Kind::Point;
    if (points <= keep_points) return;
    const Vec pi = duals();
    std::vector<std::pair<ld, size_t>> ranked;
    for (size_t j = 0; j < cols_.size(); ++j) {
      if (cols_[j].kind != Column::Kind::Point || in_basis_[j]) continue;
      ranked.emplace_back(cols_[j].cost - pi.dot(cols_[j].a), j);
    }
    std::sort(ranked.begin(), ranked.end());
    size_t drop = std::min(points - keep_points, ranked.size());
    std::vector<char> doomed(cols_.size(), 0);
    for (size_t k = 0; k < drop; ++k) doomed[ranked[k].second] = 1;
    std::vector<int> remap(cols_.size(), -1);
    std::vector<Column> kept;
    std::vector<char> kept_in;
    for (size_t j = 0; j < cols_.size(); ++j) {
      if (doomed[j]) continue;
      remap[j] = static_cast<int>(kept.size());
      kept.push_back(std::move(cols_[j]));
      kept_in.push_back(in_basis_[j]);
    }
    cols_ = std::move(kept);
    in_basis_ = std::move(kept_in);
    for (auto& b : basis_) b = remap[b];
    for (auto& c : cols_) {
      if (c.partner >= 0) c.partner = remap[c.partner];
    }
  }

 private:
  ld cost(int j) const {
    const auto& c = cols_[j];
    if (phase_ == 1) return c.kind == Column::Kind::Artificial ? -1 : 0;
    return c.kind == Column::Kind::Artificial ? 0 : c.cost;
  }

  void refactor() {
    Mat B(m_, m_);
    for (int r = 0; r < m_; ++r) B.col(r) = cols_[basis_[r]].a;
    Eigen::PartialPivLU<Mat> lu(B);
    binv_ = lu.inverse();
    xb_ = binv_ * rhs_;
    if (!binv_.allFinite()) fail(ErrorCode::NonConvergence, "minimax: basis matrix became singular");
    for (int r = 0; r < m_; ++r) {
      if (xb_(r) < 0 && xb_(r) > -1e-12L) xb_(r) = 0;
    }
    since_refactor_ = 0;
  }

  void pivot(int q, int r, const Vec& delta) {
    const ld step = delta(r) != 0 ? xb_(r) / delta(r) : 0;
    xb_ -= step * delta;
    xb_(r) = step;
    const Eigen::Matrix<ld, 1, Eigen::Dynamic> row = binv_.row(r) / delta(r);
    for (int i = 0; i < m_; ++i) {
      if (i != r && delta(i) != 0) binv_.row(i) -= delta(i) * row;
    }
    binv_.row(r) = row;
    in_basis_[basis_[r]] = 0;
    basis_[r] = q;
    in_basis_[q] = 1;
    for (int i = 0; i < m_; ++i) {
      if (xb_(i) < 0 && xb_(i) > -1e-13L) xb_(i) = 0;
    }
    ++pivots_;
    ++since_refactor_;
  }

  void iterate() {
    int degenerate = 0;
    const int cap = 200000;
    for (int steps = 0;; ++steps) {
      if (steps > cap) fail(ErrorCode::NonConvergence, "minimax: simplex pivot cap reached");
      if (since_refactor_ >= 64) refactor();
      if (phase_ == 1 && objective() >= -1e-15L) return;
      const Vec pi = duals();
      ld scale = 1;
      for (int r = 0; r < m_; ++r) scale = std::max(scale, std::abs(pi(r)));
      const ld rc_tol = 1e-15L * scale;
      const bool bland = degenerate > 50;
      int q = -1;
      ld best = rc_tol;
      for (size_t j = 0; j < cols_.size(); ++j) {
        if (in_basis_[j]) continue;
        if (phase_ == 2 && cols_[j].kind == Column::Kind::Artificial) continue;
        // Both halves of a free variable in the basis would form a zero-cost ray.
        if (cols_[j].partner >= 0 && in_basis_[cols_[j].partner]) continue;
        ld d = cost(static_cast<int>(j)) - pi.dot(cols_[j].a);
        if (d > best) {
          best = d;
          q = static_cast<int>(j);
          if (bland) break;
        }
      }
      if (q < 0) return;
      const Vec delta = binv_ * cols_[q].a;
      const ld piv_tol = 1e-9L * std::max<ld>(1, delta.cwiseAbs().maxCoeff());
      const ld feas_tol = 1e-14L;
      ld theta_max = std::numeric_limits<ld>::infinity();
      for (int i = 0; i < m_; ++i) {
        if (delta(i) > piv_tol) theta_max = std::min(theta_max, (xb_(i) + feas_tol) / delta(i));
      }
      if (!std::isfinite(theta_max)) {
        // Usually drift in the product-form inverse; retry from a fresh factorization.
        if (since_refactor_ > 0) {
          refactor();
          continue;
        }
        fail(ErrorCode::NonConvergence, "minimax: restricted dual is unbounded");
      }
      int r = -1;
      for (int i = 0; i < m_; ++i) {
        if (delta(i) <= piv_tol || xb_(i) / delta(i) > theta_max) continue;
        if (r < 0) {
          r = i;
        } else if (bland ? basis_[i] < basis_[r] : delta(i) > delta(r)) {
          r = i;
        }
      }
      const ld step = std::max<ld>(0, xb_(r) / delta(r));
      pivot(q, r, delta);
      degenerate = step <= 1e-15L ? degenerate + 1 : 0;
    }
  }

  int m_;
  Vec rhs_;
  std::vector<Column> cols_;
  std::vector<char> in_basis_;
  std::vector<int> basis_;
  Mat binv_;
  Vec xb_;
  int phase_ = 1;
  int pivots_ = 0;
  int since_refactor_ = 0;
};

cld residual(const MinimaxProblem& pr, const std::vector<cld>& c, ld x, std::vector<ld>& phi) {
  pr.basis(x, phi.data());
  cld r = pr.target ? pr.target(x) : cld(0);
  for (int k = 0; k < pr.n_coeffs; ++k) r += c[k] * phi[k];
  return r;
}

Column point_column(const MinimaxProblem& pr, ld x, ld theta, std::vector<ld>& phi) {
  const int N = pr.n_coeffs;
  Column col;
  col.kind = Column::Kind::Point;
  col.x = x;
  col.theta = theta;
  col.a = Vec::Zero(2 * N + 1);
  const ld w = pr.weight(x);
  const ld ct = std::cos(theta), st = std::sin(theta);
  pr.basis(x, phi.data());
  for (int k = 0; k < N; ++k) {
    col.a(2 * k) = w * phi[k] * ct;
    col.a(2 * k + 1) = w * phi[k] * st;
  }
  col.a(2 * N) = 1;
  if (pr.target) {
    const cld f = pr.target(x);
    col.cost = w * (ct * f.real() + st * f.imag());
  }
  return col;
}

}  // namespace

ld minimax_objective(const MinimaxProblem& pr, const std::vector<cld>& c, ld x) {
  std::vector<ld> phi(std::max(pr.n_coeffs, 1));
  return std::abs(residual(pr, c, x, phi)) * pr.weight(x);
}

std::vector<std::pair<ld, ld>> refined_maxima(const MinimaxProblem& pr,
                                              const std::vector<cld>& c) {
  const auto& g = pr.grid;
  const size_t G = g.size();
  std::vector<ld> phi(std::max(pr.n_coeffs, 1));
  std::vector<ld> v(G);
  for (size_t j = 0; j < G; ++j) v[j] = std::abs(residual(pr, c, g[j], phi)) * pr.weight(g[j]);
  std::vector<std::pair<ld, ld>> out;
  for (size_t j = 0; j < G; ++j) {
    const bool left = j == 0 || v[j] >= v[j - 1];
    const bool right = j + 1 == G || v[j] >= v[j + 1];
    if (!left || !right || v[j] == 0) continue;
    if (j == 0 || j + 1 == G) {
      out.emplace_back(v[j], g[j]);
      continue;
    }
    auto neg = [&](ld x) { return -std::abs(residual(pr, c, x, phi)) * pr.weight(x); };
    auto [x, fx] = boost::math::tools::brent_find_minima(neg, g[j - 1], g[j + 1], 40);
    if (-fx >= v[j]) {
      out.emplace_back(-fx, x);
    } else {
      out.emplace_back(v[j], g[j]);
    }
  }
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.first > b.first; });
  return out;
}

MinimaxResult solve_minimax(const MinimaxProblem& pr) {
  const int N = pr.n_coeffs;
  if (N < 1) fail(ErrorCode::Domain, "solve_minimax: need at least one coefficient");
  if (pr.grid.size() < 3) fail(ErrorCode::Domain, "solve_minimax: pricing grid too small");
  const int m = 2 * N + 1;
  DualLp lp(m);
  std::vector<ld> phi(N);

  // Seeds: the caller's points plus approximate Fekete points of the
  // weighted basis on the pricing grid (column-pivoted QR), which keep the
  // starting bases well conditioned.
  std::vector<ld> seeds = pr.seeds;
  {
    const size_t G = pr.grid.size();
    Mat M(N, G);
    for (size_t j = 0; j < G; ++j) {
      pr.basis(pr.grid[j], phi.data());
      const ld w = pr.weight(pr.grid[j]);
      for (int k = 0; k < N; ++k) M(k, static_cast<long>(j)) = w * phi[k];
    }
    Eigen::ColPivHouseholderQR<Mat> qr(M);
    const auto& perm = qr.colsPermutation().indices();
    const long take = std::min<long>(static_cast<long>(G), 2 * N);
    for (long k = 0; k < take; ++k) seeds.push_back(pr.grid[perm(k)]);
  }
  std::vector<ld> seed_scale;
  ld top = 0;
  for (ld x : seeds) {
    pr.basis(x, phi.data());
    ld s = 0;
    for (int k = 0; k < N; ++k) s = std::max(s, std::abs(phi[k]));
    seed_scale.push_back(s * pr.weight(x));
    top = std::max(top, seed_scale.back());
  }
  // Seeds where the weighted basis is negligible only spoil the conditioning.
  for (size_t j = 0; j < seeds.size(); ++j) {
    if (seed_scale[j] < 1e-6L * top) continue;
    for (int d = 0; d < 4; ++d) lp.add(point_column(pr, seeds[j], d * kPi / 2, phi));
  }
  // Free multipliers of the equality rows, split into +/- parts.
  if (!pr.equality.empty()) {
    for (int part = 0; part < 2; ++part) {
      Vec row = Vec::Zero(m);
      for (int k = 0; k < N; ++k) {
        const cld e = pr.equality[k];
        // Re: Re(c e) = Re c Re e - Im c Im e;  Im: Re c Im e + Im c Re e.
        row(2 * k) = part == 0 ? e.real() : e.imag();
        row(2 * k + 1) = part == 0 ? -e.imag() : e.real();
      }
      const int first = static_cast<int>(lp.columns().size());
      for (int sign : {1, -1}) {
        Column z;
        z.kind = Column::Kind::Free;
        z.a = -sign * row;
        z.cost = part == 0 ? static_cast<ld>(sign) : 0;
        z.partner = sign == 1 ? first + 1 : first;
        lp.add(std::move(z));
      }
    }
  }

  lp.start_phase1();
  lp.run();
  lp.finish_phase1();

  MinimaxResult res;
  res.c.assign(N, cld(0));
  ld last_gap = std::numeric_limits<ld>::infinity();
  int stalled = 0;
  for (res.rounds = 1; res.rounds <= pr.max_rounds; ++res.rounds) {
    lp.run();
    const Vec pi = lp.duals();
    for (int k = 0; k < N; ++k) res.c[k] = cld(-pi(2 * k), -pi(2 * k + 1));
    const ld t = pi(2 * N);
    res.lower = lp.objective();

    auto peaks = refined_maxima(pr, res.c);
    if (peaks.empty()) fail(ErrorCode::NonConvergence, "minimax: residual vanishes on the grid");
    res.upper = peaks.front().first;
    res.argmax = peaks.front().second;
    const ld gap = (res.upper - res.lower) / res.upper;
    if (gap <= pr.tol) break;
    if (res.rounds == pr.max_rounds) {
      fail(ErrorCode::NonConvergence, "minimax: no convergence after " +
                                          std::to_string(pr.max_rounds) + " rounds (gap " +
                                          std::to_string(static_cast<double>(gap)) + ")");
    }
    stalled = gap >= last_gap * (1 - 1e-3L) ? stalled + 1 : 0;
    if (stalled > 20) {
      fail(ErrorCode::NonConvergence, "minimax: column generation stalled at relative gap " +
                                          std::to_string(static_cast<double>(gap)));
    }
    last_gap = std::min(last_gap, gap);

    size_t added = 0;
    const size_t budget = static_cast<size_t>(std::max(8, N + 4));
    for (const auto& [value, x] : peaks) {
      if (added >= budget || value <= t * (1 + pr.tol / 4)) break;
      const cld r = [&] {
        pr.basis(x, phi.data());
        cld s = pr.target ? pr.target(x) : cld(0);
        for (int k = 0; k < N; ++k) s += res.c[k] * phi[k];
        return s;
      }();
      lp.add(point_column(pr, x, std::arg(r), phi));
      ++added;
    }
    if (added == 0) {
      fail(ErrorCode::NonConvergence, "minimax: no violated constraint found at relative gap " +
                                          std::to_string(static_cast<double>(gap)));
    }
    lp.prune(static_cast<size_t>(8 * m));
  }

  const auto& basis = lp.basis();
  const auto& xb = lp.values();
  for (int r = 0; r < m; ++r) {
    const auto& col = lp.columns()[basis[r]];
    if (col.kind == Column::Kind::Point && xb(r) > 0) res.support.push_back({col.x, col.theta, xb(r)});
  }
  std::sort(res.support.begin(), res.support.end(),
            [](const auto& a, const auto& b) { return a.x < b.x; });
  res.pivots = lp.pivots();
  return res;
}

}  // namespace bernstein::detail
