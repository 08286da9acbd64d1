#pragma once

#include <vector>

#include "bernstein/poly.hpp"
#include "bernstein/weights.hpp"

namespace bernstein {

/// T_n(z). Cosine form on [-1, 1]; elsewhere the closed form with the branch
/// of sqrt(z^2 - 1) that maximizes |z + sqrt(z^2 - 1)|.
Complex t_eval(int n, const Complex& z);

/// log |T_n(z)|, computed without forming T_n; -inf at zeros on [-1, 1].
Real t_log_abs(int n, const Complex& z);

/// T_n(x / scale) as a polynomial in the scaled Chebyshev basis.
PolyC chebyshev_poly(int n, const Real& scale);

struct Lemma1Result {
  Real lhs;      ///< |T_n(i / a)|
  Real rhs;      ///< (1/a + 1)^n / 2
  Real log_lhs;
  Real log_rhs;
  bool pass;
};

/// |T_n(i/a)| >= (1/a + 1)^n / 2 for even n, compared in log scale.
Lemma1Result lemma1_check(int n, const Real& a);

struct Lemma2Result {
  Real value;      ///< sup over x >= A_n of |T_n(x/A_n)| / W(x)
  Real log_value;
  Real argmax;
  Real a_n;
};

/// Supremum of |T_n(x/A_n)| e^{-phi(x)} over x >= A_n by a geometric grid of
/// ratio 1 + 1/(4n) followed by golden-section refinement. Needs a rapidly
/// growing weight and A_n at or beyond the class witness.
Lemma2Result lemma2_sup(const Weight& w, const GrowthClass& cls, int n);
Lemma2Result lemma2_sup(const Weight& w, int n);

/// |p(x)| <= |T_n(x)| at every sample with |x| > 1. Requires |p| <= 1 on a
/// fine grid of [-1, 1].
bool tcheb_inequality_check(const PolyC& p, int n, const std::vector<Real>& xs);

}  // namespace bernstein
