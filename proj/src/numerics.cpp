#include "bernstein/numerics.hpp"

#include <mpfr.h>

#include <algorithm>
#include <cmath>
#include <memory>

namespace bernstein {

namespace {

std::recursive_mutex& precision_mutex() {
  static std::recursive_mutex m;
  return m;
}

// Weights such as exp(exp(x)) overflow MPFR's default exponent range. The
// range is per thread in thread-safe MPFR builds.
void widen_exponent_range() {
  thread_local bool done = false;
  if (done) return;
  mpfr_set_emax(mpfr_get_emax_max());
  mpfr_set_emin(mpfr_get_emin_min());
  done = true;
}

const bool main_thread_widened = (widen_exponent_range(), true);

unsigned digits10_for_bits(unsigned bits) {
  return static_cast<unsigned>(std::ceil(bits * 0.30102999566398120)) + 1;
}

}  // namespace

const char* error_code_name(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::Domain: return "DomainError";
    case ErrorCode::BracketInvalid: return "BracketInvalid";
    case ErrorCode::BracketFailure: return "BracketFailure";
    case ErrorCode::NonConvergence: return "NonConvergence";
    case ErrorCode::Precondition: return "PreconditionError";
    case ErrorCode::PrecisionLoss: return "PrecisionLoss";
    case ErrorCode::SingularMatrix: return "SingularMatrix";
    case ErrorCode::Class: return "ClassError";
    case ErrorCode::Family: return "FamilyError";
    case ErrorCode::GridTooCoarse: return "GridTooCoarse";
    case ErrorCode::Tail: return "TailError";
    case ErrorCode::Factorization: return "FactorizationError";
    case ErrorCode::DegenerateInput: return "DegenerateInput";
    case ErrorCode::Config: return "ConfigError";
    case ErrorCode::Io: return "IoError";
    case ErrorCode::Cache: return "CacheError";
  }
  return "Error";
}

PrecisionScope::PrecisionScope(unsigned bits)
    : lock_(precision_mutex()), bits_(bits) {
  (void)main_thread_widened;
  widen_exponent_range();
  if (bits < kMinPrecisionBits) {
    fail(ErrorCode::Domain, "precision_bits must be at least 64, got " +
                                std::to_string(bits));
  }
  saved_digits10_ = Real::default_precision();
  saved_bits_ = working_precision_bits();
  Real::default_precision(digits10_for_bits(bits));
}

PrecisionScope::~PrecisionScope() { Real::default_precision(saved_digits10_); }

unsigned working_precision_bits() {
  Real probe;
  return precision_of(probe);
}

unsigned default_precision_bits(int degree) {
  return static_cast<unsigned>(std::max(256, 16 * std::max(degree, 0)));
}

unsigned precision_of(const Real& x) {
  return static_cast<unsigned>(mpfr_get_prec(x.backend().data()));
}

Real parse_real(std::string_view text) {
  std::string s(text);
  auto first = s.find_first_not_of(" \t");
  auto last = s.find_last_not_of(" \t\r\n");
  if (first == std::string::npos) fail(ErrorCode::Config, "empty numeric value");
  s = s.substr(first, last - first + 1);
  Real out;
  if (mpfr_set_str(out.backend().data(), s.c_str(), 10, MPFR_RNDN) != 0) {
    fail(ErrorCode::Config, "not a decimal number: '" + s + "'");
  }
  return out;
}

std::string to_decimal(const Real& x) {
  // 1 + ceil(p log10 2) digits always round-trip at precision p.
  auto digits = 1 + static_cast<int>(std::ceil(precision_of(x) * 0.30102999566398120));
  return to_decimal(x, digits);
}

std::string to_decimal(const Real& x, int significant_digits) {
  const mpfr_srcptr v = x.backend().data();
  if (mpfr_nan_p(v)) return "nan";
  if (mpfr_inf_p(v)) return mpfr_sgn(v) > 0 ? "inf" : "-inf";
  if (mpfr_zero_p(v)) return "0";
  mpfr_exp_t exponent = 0;
  char* raw = mpfr_get_str(nullptr, &exponent, 10,
                           static_cast<size_t>(std::max(significant_digits, 2)), v,
                           MPFR_RNDN);
  std::unique_ptr<char, void (*)(char*)> guard(raw, mpfr_free_str);
  std::string mantissa(raw);
  std::string sign;
  if (!mantissa.empty() && mantissa[0] == '-') {
    sign = "-";
    mantissa.erase(0, 1);
  }
  while (mantissa.size() > 1 && mantissa.back() == '0') mantissa.pop_back();
  std::string out = sign + mantissa.substr(0, 1);
  if (mantissa.size() > 1) out += "." + mantissa.substr(1);
  out += "e" + std::to_string(static_cast<long>(exponent) - 1);
  return out;
}

Real const_pi() { return boost::math::constants::pi<Real>(); }
Real const_e() { return exp(Real(1)); }
Real const_ln2() { return boost::math::constants::ln_two<Real>(); }

Real infinity() {
  Real r;
  mpfr_set_inf(r.backend().data(), 1);
  return r;
}

bool is_finite(const Real& x) { return mpfr_number_p(x.backend().data()) != 0; }

Real epsilon_power(double fraction) {
  auto k = static_cast<long>(std::floor(working_precision_bits() * fraction));
  return ldexp(Real(1), static_cast<int>(-k));
}

// ---------------------------------------------------------------------------

Complex& Complex::operator/=(const Complex& o) {
  Real d = norm(o);
  Real r = (re * o.re + im * o.im) / d;
  im = (im * o.re - re * o.im) / d;
  re = std::move(r);
  return *this;
}

Real abs(const Complex& z) {
  if (z.im == 0) return boost::multiprecision::abs(z.re);
  if (z.re == 0) return boost::multiprecision::abs(z.im);
  return boost::multiprecision::sqrt(norm(z));
}

Real arg(const Complex& z) { return atan2(z.im, z.re); }

Complex sqrt(const Complex& z) {
  if (z.re == 0 && z.im == 0) return {};
  Real r = abs(z);
  Real a = boost::multiprecision::sqrt((r + boost::multiprecision::abs(z.re)) / 2);
  if (z.re >= 0) return {a, z.im / (2 * a)};
  Real b = z.im >= 0 ? a : Real(-a);
  return {boost::multiprecision::abs(z.im) / (2 * a), b};
}

Complex exp(const Complex& z) {
  Real m = boost::multiprecision::exp(z.re);
  return {m * cos(z.im), m * sin(z.im)};
}

Complex log(const Complex& z) { return {boost::multiprecision::log(abs(z)), arg(z)}; }

Complex pow(const Complex& z, int k) {
  if (k < 0) return Complex(Real(1)) / pow(z, -k);
  Complex result(Real(1));
  Complex base = z;
  while (k > 0) {
    if (k & 1) result *= base;
    base *= base;
    k >>= 1;
  }
  return result;
}

// ---------------------------------------------------------------------------

Real bisect_monotone(const RealFunction& f, const Real& target, Real lo, Real hi,
                     const Real& tol) {
  if (!(lo <= hi)) fail(ErrorCode::BracketInvalid, "bisect_monotone: lo > hi");
  if (!(tol > 0)) fail(ErrorCode::Domain, "bisect_monotone: tol must be positive");
  Real flo = f(lo);
  Real fhi = f(hi);
  if (target < flo || target > fhi) {
    fail(ErrorCode::BracketInvalid, "bisect_monotone: target " + to_decimal(target, 12) +
                                        " outside [" + to_decimal(flo, 12) + ", " +
                                        to_decimal(fhi, 12) + "]");
  }
  // Width halves each pass; the cap only guards against tol below one ulp.
  for (int iter = 0; iter < 4 * static_cast<int>(working_precision_bits()) + 64; ++iter) {
    if (hi - lo <= tol) break;
    Real mid = (lo + hi) / 2;
    if (mid == lo || mid == hi) break;
    if (f(mid) < target) {
      lo = std::move(mid);
    } else {
      hi = std::move(mid);
    }
  }
  return (lo + hi) / 2;
}

Maximum golden_maximize(const RealFunction& f, Real lo, Real hi, const Real& x_tol,
                        int max_iter) {
  const Real inv_phi = (boost::multiprecision::sqrt(Real(5)) - 1) / 2;
  Real x1 = hi - inv_phi * (hi - lo);
  Real x2 = lo + inv_phi * (hi - lo);
  Real f1 = f(x1);
  Real f2 = f(x2);
  for (int iter = 0; iter < max_iter && hi - lo > x_tol; ++iter) {
    if (f1 >= f2) {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - inv_phi * (hi - lo);
      f1 = f(x1);
    } else {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + inv_phi * (hi - lo);
      f2 = f(x2);
    }
  }
  // Endpoints are candidates too: the objective may be monotone on the bracket.
  Maximum best{x1, f1};
  if (f2 > best.value) best = {x2, f2};
  for (const Real* end : {&lo, &hi}) {
    Real fe = f(*end);
    if (fe > best.value) best = {*end, fe};
  }
  return best;
}

}  // namespace bernstein
