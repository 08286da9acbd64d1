#ifndef BERNSTEIN_H
#define BERNSTEIN_H

/* C interface to the weighted polynomial approximation library.
 *
 * Every computing call returns a bn_status. On failure the message is
 * available from bn_last_error() on the same thread until the next call.
 * Numeric results are decimal strings that round-trip the full working
 * precision; they are owned by the result handle. */

#include <stddef.h>
#include <stdint.h>

#if defined(BERNSTEIN_BUILD)
#define BN_API __attribute__((visibility("default")))
#else
#define BN_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum bn_status {
  BN_OK = 0,
  BN_ERR_DOMAIN,
  BN_ERR_BRACKET_INVALID,
  BN_ERR_BRACKET_FAILURE,
  BN_ERR_NON_CONVERGENCE,
  BN_ERR_PRECONDITION,
  BN_ERR_PRECISION_LOSS,
  BN_ERR_SINGULAR_MATRIX,
  BN_ERR_CLASS,
  BN_ERR_FAMILY,
  BN_ERR_GRID_TOO_COARSE,
  BN_ERR_TAIL,
  BN_ERR_FACTORIZATION,
  BN_ERR_DEGENERATE_INPUT,
  BN_ERR_CONFIG,
  BN_ERR_IO,
  BN_ERR_CACHE,
  BN_ERR_INVALID_ARGUMENT,
  BN_ERR_INTERNAL
} bn_status;

typedef struct bn_weight bn_weight;
typedef struct bn_cache bn_cache;
typedef struct bn_result bn_result;

typedef struct bn_options {
  unsigned precision_bits; /* 0: automatic from the degree tier */
  int n_max;               /* 0: tier of the requested degree */
  double tol;              /* relative solver tolerance */
  int max_iterations;
  bn_cache* cache;         /* optional, shared across threads */
} bn_options;

BN_API const char* bn_version(void);
BN_API const char* bn_status_name(bn_status status);
BN_API const char* bn_last_error(void);

BN_API void bn_options_init(bn_options* options);
/* Smallest power of two >= max(n, 16). */
BN_API int bn_degree_tier(int n);

/* `power:2`, `powerlog:0.5`, `rationallog`, `exppower:1`, `table:<path>`. */
BN_API bn_status bn_weight_parse(const char* spec, bn_weight** out);
BN_API void bn_weight_free(bn_weight* weight);
BN_API const char* bn_weight_id(const bn_weight* weight);

/* NULL or "" keeps the cache in memory only. */
BN_API bn_status bn_cache_open(const char* dir, bn_cache** out);
BN_API void bn_cache_free(bn_cache* cache);
BN_API const char* bn_cache_dir(const bn_cache* cache);
BN_API bn_status bn_cache_info(const bn_cache* cache, size_t* files, uint64_t* bytes);
BN_API bn_status bn_cache_clear(bn_cache* cache, size_t* removed);
/* BERNSTEIN_CACHE_DIR, else a per-user default. Thread-local storage. */
BN_API const char* bn_default_cache_dir(void);

/* kind, witness_A, witness_eps */
BN_API bn_status bn_classify(const bn_weight* weight, bn_result** out);

/* n, R, A_n, tail_part, bulk_part, poisson_part, below_unit_scale */
BN_API bn_status bn_rate(const bn_weight* weight, int n, const bn_options* options,
                         bn_result** out);

/* n, p, precision_bits, E_n, log_E_n, constraint_residual, imaginary_mass,
 * lower_bound, upper_bound, relative_gap, iterations. p = INFINITY selects
 * the uniform norm. */
BN_API bn_status bn_en(const bn_weight* weight, int n, double p, const bn_options* options,
                       bn_result** out);

/* n, p, precision_bits, E_n, log_E_n, R_n, ratio. n must be >= phi(1). */
BN_API bn_status bn_sandwich_row(const bn_weight* weight, int n, double p,
                                 const bn_options* options, bn_result** out);

/* ratio_min, ratio_max, ratio_spread and, with at least 4 rows, ratio_slope
 * and en_slope (log-log against n). */
BN_API bn_status bn_sandwich_summary(const int* ns, const char* const* ratios,
                                     const char* const* neg_log_en, size_t count,
                                     bn_result** out);

/* n, class, cheb_bound_log, mergelyan_bound_log, best_bound_log and, when
 * with_en is nonzero, E_n and log_E_n for p = inf. Bounds the growth class
 * does not admit are absent. */
BN_API bn_status bn_bounds(const bn_weight* weight, int n, const bn_options* options,
                           int with_en, bn_result** out);

/* Ordered key/value view of a result; NULL for an absent key. */
BN_API const char* bn_result_get(const bn_result* result, const char* key);
BN_API size_t bn_result_size(const bn_result* result);
BN_API const char* bn_result_key(const bn_result* result, size_t index);
BN_API const char* bn_result_value(const bn_result* result, size_t index);
BN_API void bn_result_free(bn_result* result);

#ifdef __cplusplus
}
#endif

#endif /* BERNSTEIN_H */
