#include <Eigen/Dense>
#include <algorithm>
#include <boost/math/tools/minima.hpp>
#include <cmath>
#include <string>

#include "extremal_detail.hpp"

namespace bernstein::detail {

namespace {

using Vec = Eigen::Matrix<ld, Eigen::Dynamic, 1>;
using Mat = Eigen::Matrix<ld, Eigen::Dynamic, Eigen::Dynamic>;

std::vector<cld> apply(const IrlsProblem& pr, const std::vector<cld>& c, bool with_target) {
  const size_t N = pr.V.size();
  std::vector<cld> r(N);
  for (size_t j = 0; j < N; ++j) {
    cld s = pr.f.empty() || !with_target ? cld(0) : pr.f[j];
    for (size_t k = 0; k < c.size(); ++k) s += c[k] * pr.V[j][k];
    r[j] = s;
  }
  return r;
}

ld objective(const IrlsProblem& pr, const std::vector<cld>& r) {
  ld s = 0;
  for (size_t j = 0; j < r.size(); ++j) s += pr.rho[j] * std::pow(std::abs(r[j]), static_cast<ld>(pr.p));
  return s;
}

// One weighted L2 solve with weights rho * omega.
std::vector<cld> weighted_solve(const IrlsProblem& pr, const std::vector<ld>& omega) {
  const size_t N = pr.V.size();
  const size_t m = pr.V.front().size();
  Mat A(N, m);
  Vec d(N);
  for (size_t j = 0; j < N; ++j) {
    d(j) = std::sqrt(pr.rho[j] * omega[j]);
    for (size_t k = 0; k < m; ++k) A(j, k) = d(j) * pr.V[j][k];
  }
  std::vector<cld> c(m);
  if (pr.e.empty()) {
    Eigen::ColPivHouseholderQR<Mat> qr(A);
    Vec fr(N), fi(N);
    for (size_t j = 0; j < N; ++j) {
      fr(j) = d(j) * pr.f[j].real();
      fi(j) = d(j) * pr.f[j].imag();
    }
    Vec xr = qr.solve(fr), xi = qr.solve(fi);
    for (size_t k = 0; k < m; ++k) c[k] = cld(-xr(k), -xi(k));
    return c;
  }
  // Minimum of c* G c subject to e.c = 1 with G = A^T A = R^T R:
  // c = G^{-1} conj(e) / (e^T G^{-1} conj(e)).
  Eigen::HouseholderQR<Mat> qr(A);
  const Mat R = qr.matrixQR().topRows(m).template triangularView<Eigen::Upper>();
  auto solve_gram = [&](const Vec& v) {
    Vec y = R.transpose().template triangularView<Eigen::Lower>().solve(v);
    return Vec(R.template triangularView<Eigen::Upper>().solve(y));
  };
  Vec er(m), ei(m);
  for (size_t k = 0; k < m; ++k) {
    er(k) = pr.e[k].real();
    ei(k) = -pr.e[k].imag();
  }
  const Vec yr = solve_gram(er), yi = solve_gram(ei);
  cld denom = 0;
  for (size_t k = 0; k < m; ++k) denom += pr.e[k] * cld(yr(k), yi(k));
  if (!(std::abs(denom) > 0) || !std::isfinite(std::abs(denom))) {
    fail(ErrorCode::SingularMatrix, "irls: weighted Gram system is singular");
  }
  for (size_t k = 0; k < m; ++k) c[k] = cld(yr(k), yi(k)) / denom;
  return c;
}

}  // namespace

IrlsResult solve_irls(const IrlsProblem& pr) {
  if (pr.V.empty() || pr.V.front().empty()) fail(ErrorCode::Domain, "irls: empty problem");
  if (!(pr.p >= 1)) fail(ErrorCode::Domain, "irls: p must be at least 1");
  if (pr.e.empty() && pr.f.size() != pr.V.size()) {
    fail(ErrorCode::Domain, "irls: unconstrained problem needs a target");
  }
  const size_t N = pr.V.size();
  const ld p = pr.p;
  IrlsResult res;
  std::vector<ld> omega(N, 1);
  res.c = weighted_solve(pr, omega);
  res.iterations = 1;
  if (pr.p == 2) return res;

  std::vector<cld> r = apply(pr, res.c, true);
  ld F = objective(pr, r);
  ld eps0 = 0;
  if (p < 2) {
    std::vector<ld> mags;
    for (size_t j = 0; j < N; ++j) {
      if (pr.rho[j] > 0) mags.push_back(std::abs(r[j]));
    }
    std::nth_element(mags.begin(), mags.begin() + mags.size() / 2, mags.end());
    eps0 = mags[mags.size() / 2];
  }
  const ld step_hi = std::max<ld>(1, p - 1);
  for (int k = 1; k <= pr.max_iterations; ++k) {
    const ld eps = p < 2 ? eps0 * std::ldexp(1.0L, -std::min(k, 60)) : 0;
    for (size_t j = 0; j < N; ++j) {
      const ld a2 = std::norm(r[j]) + eps * eps;
      omega[j] = a2 > 0 ? std::pow(a2, (p - 2) / 2) : 0;
    }
    const std::vector<cld> target = weighted_solve(pr, omega);
    std::vector<cld> dir(target.size());
    for (size_t i = 0; i < dir.size(); ++i) dir[i] = target[i] - res.c[i];
    const std::vector<cld> rd = apply(pr, dir, false);
    auto along = [&](ld s) {
      ld acc = 0;
      for (size_t j = 0; j < N; ++j) acc += pr.rho[j] * std::pow(std::abs(r[j] + s * rd[j]), p);
      return acc;
    };
    auto [s, Fs] = boost::math::tools::brent_find_minima(along, 0.0L, step_hi, 48);
    res.iterations = k + 1;
    if (!(Fs < F)) {
      if (p < 2 && eps > eps0 * 1e-15L) continue;
      return res;
    }
    for (size_t i = 0; i < dir.size(); ++i) res.c[i] += s * dir[i];
    for (size_t j = 0; j < N; ++j) r[j] += s * rd[j];
    const ld change = (F - Fs) / F;
    F = Fs;
    if (change <= pr.tol && (p >= 2 || eps <= eps0 * 1e-12L)) return res;
  }
  fail(ErrorCode::NonConvergence,
       "irls: no convergence after " + std::to_string(pr.max_iterations) + " iterations");
}

}  // namespace bernstein::detail
