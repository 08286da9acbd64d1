#include "bernstein/poly.hpp"

#include <algorithm>
#include <cmath>

namespace bernstein {

namespace {

void trim(std::vector<Complex>& c) {
  while (!c.empty() && c.back().re == 0 && c.back().im == 0) c.pop_back();
}

// Multiply a Chebyshev series in y by y: y T_0 = T_1, y T_k = (T_{k+1} + T_{k-1}) / 2.
std::vector<Complex> cheb_times_y(const std::vector<Complex>& c) {
  std::vector<Complex> out(c.size() + 1);
  for (size_t k = 0; k < c.size(); ++k) {
    if (k == 0) {
      out[1] += c[0];
    } else {
      Complex h = c[k] / Real(2);
      out[k + 1] += h;
      out[k - 1] += h;
    }
  }
  return out;
}

Complex horner(const std::vector<Complex>& c, const Complex& z) {
  Complex acc;
  for (size_t k = c.size(); k-- > 0;) {
    acc *= z;
    acc += c[k];
  }
  return acc;
}

}  // namespace

PolyC::PolyC(std::vector<Complex> coeffs, PolyBasis basis, Real scale)
    : coeffs_(std::move(coeffs)), basis_(basis), scale_(std::move(scale)) {
  if (basis_ == PolyBasis::ChebyshevScaled && !(scale_ > 0)) {
    fail(ErrorCode::Domain, "Chebyshev scale must be positive");
  }
  trim(coeffs_);
}

PolyC PolyC::from_real(const std::vector<Real>& coeffs) {
  std::vector<Complex> c;
  c.reserve(coeffs.size());
  for (const auto& r : coeffs) c.emplace_back(r);
  return PolyC(std::move(c));
}

Complex PolyC::operator()(const Complex& z) const {
  if (basis_ == PolyBasis::Monomial) return horner(coeffs_, z);
  // Clenshaw in y = z / a.
  const Complex y = z / scale_;
  const Complex two_y = y * Real(2);
  Complex b1;
  Complex b2;
  for (size_t k = coeffs_.size(); k-- > 1;) {
    Complex b0 = coeffs_[k] + two_y * b1 - b2;
    b2 = std::move(b1);
    b1 = std::move(b0);
  }
  if (coeffs_.empty()) return {};
  return coeffs_[0] + y * b1 - b2;
}

Complex PolyC::operator()(const Real& x) const { return (*this)(Complex(x)); }

PolyC PolyC::to_monomial() const {
  if (basis_ == PolyBasis::Monomial) return *this;
  // T_k(y) in monomials of y, then y^j = x^j / a^j.
  std::vector<Complex> out(coeffs_.size());
  std::vector<Real> t_prev{Real(1)};
  std::vector<Real> t_cur{Real(0), Real(1)};
  for (size_t k = 0; k < coeffs_.size(); ++k) {
    const std::vector<Real>& tk = k == 0 ? t_prev : t_cur;
    for (size_t j = 0; j < tk.size(); ++j) {
      if (tk[j] != 0) out[j] += coeffs_[k] * tk[j];
    }
    if (k >= 1) {
      std::vector<Real> t_next(t_cur.size() + 1, Real(0));
      for (size_t j = 0; j < t_cur.size(); ++j) t_next[j + 1] += 2 * t_cur[j];
      for (size_t j = 0; j < t_prev.size(); ++j) t_next[j] -= t_prev[j];
      t_prev = std::move(t_cur);
      t_cur = std::move(t_next);
    }
  }
  Real inv_a = 1 / scale_;
  Real factor = 1;
  for (auto& c : out) {
    c *= factor;
    factor *= inv_a;
  }
  return PolyC(std::move(out));
}

PolyC PolyC::to_chebyshev(const Real& scale) const {
  PolyC mono = to_monomial();
  // Horner in the Chebyshev basis: acc = acc * x + c_k with x = a y.
  std::vector<Complex> acc;
  for (size_t k = mono.coeffs_.size(); k-- > 0;) {
    acc = cheb_times_y(acc);
    for (auto& c : acc) c *= scale;
    if (acc.empty()) acc.resize(1);
    acc[0] += mono.coeffs_[k];
  }
  return PolyC(std::move(acc), PolyBasis::ChebyshevScaled, scale);
}

PolyC PolyC::derivative() const {
  if (basis_ != PolyBasis::Monomial) return to_monomial().derivative();
  if (coeffs_.size() <= 1) return PolyC();
  std::vector<Complex> d(coeffs_.size() - 1);
  for (size_t k = 1; k < coeffs_.size(); ++k) d[k - 1] = coeffs_[k] * Real(static_cast<long>(k));
  return PolyC(std::move(d));
}

Real PolyC::imaginary_mass() const {
  Real top = 0;
  Real imag = 0;
  for (const auto& c : coeffs_) {
    top = std::max(top, abs(c));
    imag = std::max(imag, Real(boost::multiprecision::abs(c.im)));
  }
  return top == 0 ? Real(0) : Real(imag / top);
}

PolyC operator*(const PolyC& a, const PolyC& b) {
  PolyC ma = a.to_monomial();
  PolyC mb = b.to_monomial();
  if (ma.is_zero() || mb.is_zero()) return PolyC();
  std::vector<Complex> out(ma.coeffs().size() + mb.coeffs().size() - 1);
  for (size_t i = 0; i < ma.coeffs().size(); ++i) {
    for (size_t j = 0; j < mb.coeffs().size(); ++j) out[i + j] += ma.coeffs()[i] * mb.coeffs()[j];
  }
  return PolyC(std::move(out));
}

// ---------------------------------------------------------------------------

Real root_residual(const PolyC& p, const Complex& z) {
  const auto& c = p.coeffs();
  Real r = abs(z);
  Real scale = 0;
  for (size_t k = c.size(); k-- > 0;) scale = scale * r + abs(c[k]);
  if (scale == 0) return Real(0);
  return abs(horner(c, z)) / scale;
}

namespace {

// Initial moduli from the upper convex hull of (k, log|c_k|).
std::vector<Real> newton_polygon_radii(const std::vector<Complex>& c) {
  const int n = static_cast<int>(c.size()) - 1;
  std::vector<int> idx;
  std::vector<double> logc(n + 1);
  for (int k = 0; k <= n; ++k) {
    Real m = abs(c[k]);
    logc[k] = m == 0 ? -std::numeric_limits<double>::infinity()
                     : static_cast<double>(log(m));
  }
  for (int k = 0; k <= n; ++k) {
    if (!std::isfinite(logc[k])) continue;
    while (idx.size() >= 2) {
      int i = idx[idx.size() - 2];
      int j = idx.back();
      // Drop j if it lies on or below the chord from i to k.
      if ((logc[j] - logc[i]) * (k - i) <= (logc[k] - logc[i]) * (j - i)) {
        idx.pop_back();
      } else {
        break;
      }
    }
    idx.push_back(k);
  }
  std::vector<Real> radii(n);
  for (size_t h = 1; h < idx.size(); ++h) {
    int i = idx[h - 1];
    int j = idx[h];
    double r = std::exp((logc[i] - logc[j]) / (j - i));
    for (int m = i; m < j; ++m) radii[m] = r;
  }
  return radii;
}

}  // namespace

std::vector<Complex> find_roots(const PolyC& p_in, const RootOptions& options) {
  PolyC p = p_in.to_monomial();
  if (p.degree() < 1) fail(ErrorCode::Domain, "find_roots: degree must be at least 1");
  const Real tol = options.root_tol > 0 ? options.root_tol : epsilon_power(0.5);

  // Exact zeros at the origin are split off first.
  std::vector<Complex> coeffs = p.coeffs();
  std::vector<Complex> roots;
  size_t shift = 0;
  while (coeffs[shift].re == 0 && coeffs[shift].im == 0) {
    roots.emplace_back();
    ++shift;
  }
  coeffs.erase(coeffs.begin(), coeffs.begin() + static_cast<long>(shift));
  const int n = static_cast<int>(coeffs.size()) - 1;
  if (n == 0) return roots;

  // Normalize to a monic polynomial.
  const Complex lead = coeffs.back();
  for (auto& c : coeffs) c /= lead;
  PolyC q(coeffs);
  std::vector<Complex> dq = q.derivative().coeffs();

  std::vector<Real> radii = newton_polygon_radii(coeffs);
  std::vector<Complex> z(n);
  const Real two_pi = 2 * const_pi();
  for (int k = 0; k < n; ++k) {
    Real angle = two_pi * k / n + Real(0.4) + Real(k) / (7 * n);
    z[k] = Complex(radii[k] * cos(angle), radii[k] * sin(angle));
  }

  std::vector<bool> done(n, false);
  int converged = 0;
  int polish = 0;
  for (int iter = 0; iter < options.max_iterations; ++iter) {
    for (int k = 0; k < n; ++k) {
      if (done[k] && polish == 0) continue;
      Complex pv = horner(coeffs, z[k]);
      if (pv.re == 0 && pv.im == 0) {
        if (!done[k]) {
          done[k] = true;
          ++converged;
        }
        continue;
      }
      Complex dv = horner(dq, z[k]);
      Complex ratio = pv / dv;
      Complex sum;
      for (int j = 0; j < n; ++j) {
        if (j != k) sum += Complex(Real(1)) / (z[k] - z[j]);
      }
      Complex denom = Complex(Real(1)) - ratio * sum;
      z[k] -= ratio / denom;
      if (!done[k] && root_residual(q, z[k]) <= tol) {
        done[k] = true;
        ++converged;
      }
    }
    if (converged == n) {
      // A few extra sweeps take the roots from the tolerance to full precision.
      if (++polish > 3) {
        roots.insert(roots.end(), z.begin(), z.end());
        return roots;
      }
    }
  }
  fail(ErrorCode::NonConvergence, "find_roots: Aberth iteration did not converge in " +
                                      std::to_string(options.max_iterations) + " sweeps");
}

}  // namespace bernstein
