#pragma once

#include <vector>

#include "bernstein/numerics.hpp"

namespace bernstein {

enum class PolyBasis { Monomial, ChebyshevScaled };

/// Polynomial with complex coefficients in ascending degree.
///
/// ChebyshevScaled(a) stores coefficients of T_k(x / a). Trailing zero
/// coefficients are trimmed on construction, so the leading coefficient is
/// nonzero unless the polynomial is identically zero (degree -1).
class PolyC {
 public:
  PolyC() = default;
  explicit PolyC(std::vector<Complex> coeffs, PolyBasis basis = PolyBasis::Monomial,
                 Real scale = Real(1));
  static PolyC from_real(const std::vector<Real>& coeffs);

  int degree() const { return static_cast<int>(coeffs_.size()) - 1; }
  bool is_zero() const { return coeffs_.empty(); }
  PolyBasis basis() const { return basis_; }
  const Real& scale() const { return scale_; }
  const std::vector<Complex>& coeffs() const { return coeffs_; }
  const Complex& leading() const { return coeffs_.back(); }

  Complex operator()(const Complex& z) const;
  Complex operator()(const Real& x) const;

  PolyC to_monomial() const;
  PolyC to_chebyshev(const Real& scale) const;
  PolyC derivative() const;  // monomial basis

  /// Largest |Im c_k| relative to the largest |c_k|.
  Real imaginary_mass() const;

 private:
  std::vector<Complex> coeffs_;
  PolyBasis basis_ = PolyBasis::Monomial;
  Real scale_ = 1;
};

PolyC operator*(const PolyC& a, const PolyC& b);  // monomial basis

struct RootOptions {
  /// Backward-error tolerance |p(z)| <= root_tol * sum |c_k| |z|^k.
  /// Zero selects 2^(-bits/2).
  Real root_tol = 0;
  int max_iterations = 2000;
};

/// All roots with multiplicity by Aberth-Ehrlich simultaneous iteration,
/// started from Newton-polygon radii with offset roots of unity.
std::vector<Complex> find_roots(const PolyC& p, const RootOptions& options = {});

/// Backward-error residual |p(z)| / sum |c_k| |z|^k of a monomial polynomial.
Real root_residual(const PolyC& p, const Complex& z);

}  // namespace bernstein
