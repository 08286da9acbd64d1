#pragma once

#include <complex>
#include <vector>

#include "bernstein/extremal.hpp"

namespace bernstein::detail {

using ld = long double;
using cld = std::complex<ld>;

inline ld to_ld(const Real& x) { return x.convert_to<long double>(); }
inline cld to_ld(const Complex& z) { return {to_ld(z.re), to_ld(z.im)}; }
inline Complex from_ld(const cld& z) { return {Real(z.real()), Real(z.imag())}; }

/// Recurrence rounded to long double for fast evaluation of p_0 .. p_n.
struct LdRecurrence {
  std::vector<ld> a;
  std::vector<ld> sb;  ///< sqrt(b_{k+1})
  ld p0 = 0;
  int n = 0;

  LdRecurrence(const Recurrence& r, int degree);
  void eval(ld x, ld* out) const;
};

/// Monomial polynomial sum_k c_k p_k from monomial coefficients of p_k.
PolyC combine_monomial(const std::vector<std::vector<Real>>& mono, const std::vector<Complex>& c);

/// Weighted least-squares iterations for
///   minimize sum_j rho_j |f_j + (V c)_j|^p   [subject to sum_k c_k e_k = 1].
struct IrlsProblem {
  std::vector<std::vector<ld>> V;  ///< rows: basis values at node j
  std::vector<ld> rho;
  std::vector<cld> f;  ///< empty means f = 0
  std::vector<cld> e;  ///< empty means unconstrained
  double p = 2;
  double tol = 1e-10;
  int max_iterations = 500;
};

struct IrlsResult {
  std::vector<cld> c;
  int iterations = 0;
};

/// NonConvergence after the iteration cap.
IrlsResult solve_irls(const IrlsProblem& pr);

}  // namespace bernstein::detail
