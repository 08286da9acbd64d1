#pragma once

// Extremal problems E_n(p, W): the smallest weighted norm ||P||_{p,W_1} of a
// degree-n polynomial with P(i) = 1, equivalently the best approximation of
// the Cauchy kernel 1/(x - i) by degree n-1 polynomials in ||.||_{p,W}.

#include <complex>
#include <filesystem>
#include <limits>
#include <map>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "bernstein/poly.hpp"
#include "bernstein/weights.hpp"

namespace bernstein {

inline constexpr double kInfinityP = std::numeric_limits<double>::infinity();

/// Density e^{-s phi(|x|)} (1 + x^2)^{-beta} of a measure on the real line.
struct Density {
  std::string tag;  ///< cache key component
  Real s;
  Real beta;

  /// dx / ((x^2 + 1) W^2), the measure of ||.||_{2,W_1}.
  static Density mu();
  /// dx / W^2, the measure of ||.||_{2,W}.
  static Density nu();
  /// dx / ((x^2 + 1)^{p/2} W^p), the measure of ||.||_{p,W_1}^p.
  static Density lp(double p);
  /// dx / W^p, the measure of ||.||_{p,W}^p.
  static Density nu_p(double p);

  Real log_value(const Weight& w, const Real& x) const;
};

/// Symmetric quadrature for a density: exact (to the grid tolerance) for
/// polynomials of degree <= 2 n_max + 2 times the density.
struct MeasureGrid {
  std::vector<Real> nodes;    ///< ascending, symmetric about 0
  std::vector<Real> weights;  ///< density already folded in
  Real cutoff_X;
  int n_max = 0;
  std::string density_tag;
};

struct GridOptions {
  /// Relative accuracy of the even moments; zero selects 2^(-bits/2).
  Real tol = 0;
  /// Gauss-Legendre order per panel; zero selects max(20, bits/12).
  int gauss_order = 0;
  /// Bisection depth cap; zero selects bits/2 + 40 (endpoint singularities
  /// such as x^1.5 at the origin refine geometrically).
  int max_depth = 0;
};

/// Smallest power of two X beyond the peak of x^{2 n_max} rho(x) with
/// x^{2 n_max} rho(X) below threshold * peak. NonConvergence past 2^60.
Real measure_cutoff(const Weight& w, const Density& d, int n_max, const Real& threshold);

MeasureGrid build_measure_grid(const Weight& w, int n_max, const QuadratureSpec& spec,
                               const Density& d = Density::mu(), const GridOptions& opt = {});

/// Orthonormal three-term recurrence
///   x p_k = sqrt(b_{k+1}) p_{k+1} + a_k p_k + sqrt(b_k) p_{k-1},
/// with b_0 the total mass and p_0 = b_0^{-1/2}.
struct Recurrence {
  std::vector<Real> a;  ///< a_0 .. a_{n}
  std::vector<Real> b;  ///< b_0 .. b_{n+1}
  int degree() const { return static_cast<int>(a.size()) - 1; }
  Real mass() const { return b.front(); }
};

/// Discretized Stieltjes procedure on a grid up to degree n.
/// PrecisionLoss when a computed squared norm is not positive.
Recurrence stieltjes(const std::vector<Real>& nodes, const std::vector<Real>& weights, int n);
Recurrence stieltjes(const MeasureGrid& grid, int n);

/// p_0(z) .. p_n(z) of a recurrence.
std::vector<Complex> orthonormal_values(const Recurrence& r, int n, const Complex& z);
std::vector<Real> orthonormal_values(const Recurrence& r, int n, const Real& x);
/// Monomial coefficients of p_0 .. p_n.
std::vector<std::vector<Real>> orthonormal_monomials(const Recurrence& r, int n);

/// On-disk and in-memory store of recurrences keyed by
/// (weight id, density, precision, cutoff, n_max). Safe for concurrent use.
class RecurrenceCache {
 public:
  struct Key {
    std::string weight_id;
    std::string density;
    unsigned precision_bits = 0;
    std::string cutoff;  ///< decimal string of cutoff_X
    int n_max = 0;
    bool operator<(const Key& o) const;
    bool operator==(const Key& o) const;
  };

  /// Empty directory disables the file layer.
  explicit RecurrenceCache(std::filesystem::path dir = {});

  std::optional<Recurrence> load(const Key& key);
  void store(const Key& key, const Recurrence& r);

  const std::filesystem::path& dir() const { return dir_; }
  std::filesystem::path file_for(const Key& key) const;

  struct Stats {
    size_t files = 0;
    uintmax_t bytes = 0;
  };
  Stats stats() const;
  /// Removes every cache file in the directory; returns how many.
  size_t clear();

  size_t hits() const { return hits_; }
  size_t misses() const { return misses_; }

 private:
  std::filesystem::path dir_;
  mutable std::mutex mutex_;
  std::map<Key, Recurrence> memory_;
  size_t hits_ = 0;
  size_t misses_ = 0;
};

/// Cache directory from BERNSTEIN_CACHE_DIR, else ~/.cache/bernstein.
std::filesystem::path default_cache_dir();

struct SupportPoint {
  Real x;
  Real theta;   ///< direction of the linearized modulus constraint
  Real weight;  ///< dual multiplier
};

struct Certificate {
  enum class Kind { ChristoffelKernel, MinimaxDual, Reweighted, Projection, Closed };
  Kind kind = Kind::Closed;
  Real kernel_value;   ///< K_n(i, i) for p = 2
  Real lower_bound;    ///< dual objective for p = inf
  Real upper_bound;    ///< sup of the extremal polynomial over the refined grid
  Real relative_gap;
  std::vector<SupportPoint> support;
  int iterations = 0;
};

struct ErrorRecord {
  int n = 0;
  double p = 2;
  std::string weight_id;
  unsigned precision_bits = 0;
  Real value;
  Real log_value;
  /// Degree-n polynomial with P(i) = 1 attaining the value (monomial basis).
  PolyC extremal_poly;
  Real constraint_residual;  ///< |P(i) - 1|
  Real imaginary_mass;       ///< largest |Im c_k| / largest |c_k| of P
  Certificate certificate;
};

struct SolverOptions {
  /// Zero selects max(256, 16 * n_max).
  unsigned precision_bits = 0;
  /// Zero selects the degree tier next_pow2(max(n, 16)).
  int n_max = 0;
  /// Relative stopping tolerance (duality gap or objective change).
  double tol = 1e-10;
  int max_iterations = 500;
  RecurrenceCache* cache = nullptr;
};

int degree_tier(int n);
unsigned solver_precision(int n, const SolverOptions& opt);

/// Recurrence for a density at the tier of n, served from the cache when
/// possible. Must run inside a PrecisionScope.
Recurrence measure_recurrence(const Weight& w, const Density& d, int n_max,
                              RecurrenceCache* cache);

/// p = 2 by the Christoffel function: E_n = K_n(i, i)^{-1/2}.
ErrorRecord en_l2(const Weight& w, int n, const SolverOptions& opt = {});
/// Same on a caller-supplied grid; runs at the current working precision.
ErrorRecord en_l2(const Weight& w, int n, const MeasureGrid& grid);

/// Moment-matrix route on a grid; n <= 16. SingularMatrix if G is not
/// numerically positive definite.
Real en_l2_gram_oracle(const Weight& w, int n, const MeasureGrid& grid);

/// p = inf by a column-generation linear program over (x, direction) pairs.
ErrorRecord en_uniform(const Weight& w, int n, const SolverOptions& opt = {});

/// 1 <= p < inf by iteratively reweighted least squares.
ErrorRecord en_lp(const Weight& w, int n, double p, const SolverOptions& opt = {});

/// Dispatches on p (2, inf, otherwise IRLS).
ErrorRecord compute_en(const Weight& w, int n, double p, const SolverOptions& opt = {});

struct CauchyApprox {
  PolyC q;   ///< degree <= n - 1
  Real err;  ///< ||1/(x - i) - q||_{p,W}
  Real log_err;
  PolyC p_poly;  ///< 1 - (x - i) q
};

/// Direct best approximation of the Cauchy kernel, n >= 0 (n = 0: q = 0).
CauchyApprox cauchy_best_approx(const Weight& w, int n, double p, const SolverOptions& opt = {});

struct MarkovCheck {
  Real max_p;  ///< (max over [-a, a] of |q|)^p
  Real bound;  ///< (2^{p+2} n^2 / a) times the integral of |q|^p over [-a, a]
  bool pass;
};

/// Markov-type comparison for a real polynomial q, read as a polynomial of
/// degree n (n < 0: its actual degree; n must be >= max(1, deg q)).
MarkovCheck markov_lemma_check(const PolyC& q, const Real& a, double p, int n = -1);

struct RateRow {
  int n = 0;
  Real R;
  Real neg_log_en;
  Real ratio;  ///< -log E_n / R(n)
  ErrorRecord record;
};

struct RateReport {
  std::string weight_id;
  double p = 2;
  std::vector<RateRow> rows;
  Real ratio_spread;  ///< max ratio / min ratio
  /// Log-log slopes against n; present with at least 4 rows.
  std::optional<Real> ratio_slope;  ///< of the ratio
  std::optional<Real> en_slope;     ///< of -log E_n
};

RateReport sandwich_report(const Weight& w, double p, const std::vector<int>& ns,
                           const SolverOptions& opt = {});

}  // namespace bernstein
